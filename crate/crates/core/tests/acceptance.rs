//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime (run with `--nocapture` to see them). Exact criteria assert
//! deviation 0 in rational arithmetic; float criteria assert the stated
//! tolerances.

use std::time::Instant;

use latticew::ds::{
    gauge_act, invariants_from_matrices, reduced_bracket, scalar_section_bracket, section_point,
    xf_field, yf_field, MatrixSequence,
};
use latticew::functional::CoordPoly;
use latticew::looprep::loop_matrix;
use latticew::op::LaurentOperator;
use latticew::poisson::{
    bracket_coordinates, conjugate, jacobi_residual, left_multiply, m2_closed_form_bracket,
    poisson_tensor_apply, CoordinateIndex,
};
use latticew::polygon::{operator_from_polygon, polygon_from_operator, CompanionSequence};
use latticew::sample;
use latticew::scalar::Rat;
use latticew::w2::verify_w2_reduction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn trial_rng(base: u64, k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(base.wrapping_add(k.wrapping_mul(GOLDEN)))
}

fn report(index: usize, name: &str, start: Instant) {
    println!(
        "ACCEPTANCE {index}: {name}: PASS ({:.2}s)",
        start.elapsed().as_secs_f64()
    );
}

fn all_coordinates(order: usize, n: usize) -> Vec<CoordinateIndex> {
    (0..=order)
        .flat_map(|j| (0..n).map(move |t| CoordinateIndex::new(j, t)))
        .collect()
}

fn invariant_keys(m: usize, n: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|r| (0..n).map(move |s| (r, s))).collect()
}

#[test]
fn criterion_1_m2_bracket_table() {
    let start = Instant::now();
    let cases: Vec<(usize, u64)> = (3..=8usize)
        .flat_map(|n| (0..100u64).map(move |t| (n, t)))
        .collect();
    cases.par_iter().for_each(|&(n, t)| {
        let mut rng = trial_rng(101, (n as u64) << 32 | t);
        let d = sample::properly_bounded_operator::<Rat>(&mut rng, n, 2);
        let coords = all_coordinates(2, n);
        for (i, &p) in coords.iter().enumerate() {
            for &q in &coords[i..] {
                let general = bracket_coordinates(&d, p, q).unwrap();
                let table = m2_closed_form_bracket(&d, p, q);
                assert_eq!(general, table, "n={n} trial={t} p={p:?} q={q:?}");
            }
        }
    });
    report(1, "m=2 bracket table, exact, N in 3..=8", start);
}

#[test]
fn criterion_2_w2_reduction() {
    let start = Instant::now();
    let cases: Vec<(usize, u64)> = (4..=8usize)
        .flat_map(|n| (0..50u64).map(move |t| (n, t)))
        .collect();
    cases.par_iter().for_each(|&(n, t)| {
        let mut rng = trial_rng(202, (n as u64) << 32 | t);
        let d = sample::w2_chart_operator::<Rat>(&mut rng, n);
        let residual = verify_w2_reduction(&d).unwrap();
        assert_eq!(residual, 0.0, "n={n} trial={t}");
    });
    // float mode residual stays within 1e-10
    for n in 4..=8usize {
        for t in 0..5u64 {
            let mut rng = trial_rng(203, (n as u64) << 32 | t);
            let d = sample::w2_chart_operator::<f64>(&mut rng, n);
            let residual = verify_w2_reduction(&d).unwrap();
            assert!(residual <= 1e-10, "float n={n} trial={t}: {residual}");
        }
    }
    report(2, "W2 reduction identity, exact and float", start);
}

#[test]
fn criterion_3_submanifold_and_vanishing() {
    let start = Instant::now();
    (0..200u64).into_par_iter().for_each(|t| {
        let m = 1 + (t % 3) as usize;
        let mut rng = trial_rng(303, t);
        let n = rng.gen_range(3..=6);
        let d = sample::properly_bounded_operator::<Rat>(&mut rng, n, m);
        let x = sample::operator::<Rat>(&mut rng, n, -(m as i64), m as i64);
        let image = poisson_tensor_apply(&d, &x).unwrap();
        assert!(
            image.is_zero() || (image.lo() >= 0 && image.hi() <= m as i64),
            "trial={t} image window [{}, {}]",
            image.lo(),
            image.hi()
        );
        let d0 = LaurentOperator::order_zero(sample::nonzero_sequence::<Rat>(&mut rng, n));
        let image0 = poisson_tensor_apply(&d0, &x).unwrap();
        assert!(image0.is_zero(), "trial={t}");
    });
    report(3, "Poisson submanifold and order-zero vanishing", start);
}

#[test]
fn criterion_4_conjugation_and_left_invariance() {
    let start = Instant::now();
    (0..100u64).into_par_iter().for_each(|t| {
        let m = 2 + (t % 2) as usize;
        let mut rng = trial_rng(404, t);
        let n = 5;
        let d = sample::properly_bounded_operator::<Rat>(&mut rng, n, m);
        let alpha = sample::quasi_periodic::<Rat>(&mut rng, n);
        let conj = conjugate(&d, &alpha).unwrap();
        let scale = sample::nonzero_sequence::<Rat>(&mut rng, n);
        let scaled = left_multiply(&d, &scale).unwrap();
        let coords = all_coordinates(m, n);
        for (i, &p) in coords.iter().enumerate() {
            for &q in &coords[i..] {
                let base = bracket_coordinates(&d, p, q).unwrap();
                // conjugation pulls coordinates back to constant multiples
                let cp = alpha.ratio(p.site as i64, p.power as i64);
                let cq = alpha.ratio(q.site as i64, q.power as i64);
                assert_eq!(
                    bracket_coordinates(&conj, p, q).unwrap(),
                    cp * cq * base.clone(),
                    "conjugation trial={t} p={p:?} q={q:?}"
                );
                let lp = scale.get(p.site as i64).clone();
                let lq = scale.get(q.site as i64).clone();
                assert_eq!(
                    bracket_coordinates(&scaled, p, q).unwrap(),
                    lp * lq * base,
                    "left trial={t} p={p:?} q={q:?}"
                );
            }
        }
    });
    report(4, "conjugation and left-multiplication invariance", start);
}

#[test]
fn criterion_5_jacobi_float() {
    let start = Instant::now();
    let combos = [(2usize, 4usize), (2, 5), (3, 4), (3, 5)];
    let cases: Vec<(usize, usize, u64)> = combos
        .iter()
        .flat_map(|&(m, n)| (0..25u64).map(move |t| (m, n, t)))
        .collect();
    cases.par_iter().for_each(|&(m, n, t)| {
        let mut rng = trial_rng(505, (m as u64) << 40 | (n as u64) << 32 | t);
        let d = sample::properly_bounded_operator::<f64>(&mut rng, n, m);
        let pick = |rng: &mut ChaCha8Rng| {
            CoordinateIndex::new(rng.gen_range(0..=m), rng.gen_range(0..n))
        };
        let (p, q, r) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let residual = jacobi_residual(&d, p, q, r, 1e-5);
        assert!(
            residual.abs() <= 1e-6,
            "m={m} n={n} trial={t} residual={residual}"
        );
    });
    report(5, "Jacobi identity, finite-difference outer derivative", start);
}

#[test]
fn criterion_6_xf_equals_yf() {
    let start = Instant::now();
    let cases: Vec<(usize, usize, u64)> = [2usize, 3, 4]
        .iter()
        .flat_map(|&m| [5usize, 7].iter().map(move |&n| (m, n)))
        .flat_map(|(m, n)| (0..50u64).map(move |t| (m, n, t)))
        .collect();
    cases.par_iter().for_each(|&(m, n, t)| {
        let mut rng = trial_rng(606, (m as u64) << 40 | (n as u64) << 32 | t);
        let p = sample::twisted_polygon::<Rat>(&mut rng, m, n);
        let f = CoordPoly::random_deg2(&mut rng, &invariant_keys(m, n));
        let x = xf_field(&f, &p).unwrap();
        let y = yf_field(&f, &p).unwrap();
        assert_eq!(x, y, "m={m} n={n} trial={t}");
    });
    report(6, "X^f = Y^f, exact, m in {2,3,4}, N in {5,7}", start);
}

#[test]
fn criterion_7_bracket_equivalence() {
    let start = Instant::now();
    let cases: Vec<(usize, usize, u64)> = [2usize, 3]
        .iter()
        .flat_map(|&m| [5usize, 7].iter().map(move |&n| (m, n)))
        .flat_map(|(m, n)| (0..50u64).map(move |t| (m, n, t)))
        .collect();
    cases.par_iter().for_each(|&(m, n, t)| {
        let mut rng = trial_rng(707, (m as u64) << 40 | (n as u64) << 32 | t);
        let d = sample::rdo_operator::<Rat>(&mut rng, n, m);
        let a = CompanionSequence::from_rdo_operator(&d).unwrap();
        let keys = invariant_keys(m, n);
        let f = CoordPoly::random_deg2(&mut rng, &keys);
        let g = CoordPoly::random_deg2(&mut rng, &keys);
        let reduced = reduced_bracket(&f, &g, &a).unwrap();
        let scalar = scalar_section_bracket(&f, &g, &a).unwrap();
        assert_eq!(reduced, scalar, "m={m} n={n} trial={t}");
    });
    report(7, "reduced bracket equals scalar bracket on the section", start);
}

#[test]
fn criterion_8_loop_representation() {
    let start = Instant::now();
    (0..100u64).into_par_iter().for_each(|t| {
        let mut rng = trial_rng(808, t);
        let n = rng.gen_range(2..=6);
        let (lo1, hi1) = (rng.gen_range(-2..=0), rng.gen_range(1..=2));
        let (lo2, hi2) = (rng.gen_range(-2..=0), rng.gen_range(1..=2));
        let d1 = sample::operator::<Rat>(&mut rng, n, lo1, hi1);
        let d2 = sample::operator::<Rat>(&mut rng, n, lo2, hi2);
        let lhs = loop_matrix(&d1.multiply(&d2).unwrap()).unwrap();
        let rhs = loop_matrix(&d1).unwrap().mul(&loop_matrix(&d2).unwrap());
        assert_eq!(lhs, rhs, "trial={t}");
        assert_eq!(
            lhs.matrix_trace().coeff(0),
            d1.multiply(&d2).unwrap().trace(),
            "trial={t}"
        );
    });
    report(8, "loop representation homomorphism and trace", start);
}

#[test]
fn criterion_9_roundtrips_and_gauge_invariance() {
    let start = Instant::now();
    (0..100u64).into_par_iter().for_each(|t| {
        let m = 2 + (t % 2) as usize;
        let mut rng = trial_rng(909, t);
        let n = rng.gen_range(4..=6);

        // operator → polygon → operator recovers the monic form
        let d = sample::properly_bounded_operator::<Rat>(&mut rng, n, m);
        let p = polygon_from_operator(&d).unwrap();
        let rdo = operator_from_polygon(&p).unwrap();
        let scale = d.coeff(m as i64).recip("a^m").unwrap().neg();
        let monic = LaurentOperator::order_zero(scale).multiply(&d).unwrap();
        assert_eq!(rdo, monic, "trial={t}");

        // invariants are constant along gauge orbits
        let a = CompanionSequence::from_rdo_operator(&rdo).unwrap();
        let b = section_point(&a).unwrap();
        let h = MatrixSequence::new(
            (0..n).map(|_| sample::h_matrix::<Rat>(&mut rng, m)).collect(),
        )
        .unwrap();
        let moved = gauge_act(&h, &b).unwrap();
        assert_eq!(invariants_from_matrices(&moved).unwrap(), a, "trial={t}");

        // polygon transformed by a global linear map keeps its invariants
        let g = sample::gl_matrix::<Rat>(&mut rng, m);
        assert_eq!(
            operator_from_polygon(&p.transform(&g).unwrap()).unwrap(),
            rdo,
            "trial={t}"
        );
    });
    report(9, "polygon/operator roundtrips and gauge invariance", start);
}
