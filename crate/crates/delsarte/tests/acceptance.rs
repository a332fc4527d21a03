//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line. Every comparison is an exact rational equality; there are
//! no tolerances anywhere.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

#![allow(clippy::needless_range_loop)] // index loops mirror the formulas

use delsarte::bounds::{
    ekr_bound, ekr_closed_form, ekr_simple_bound, lp_optimum_bcd, lp_optimum_bcd_direct,
    lp_optimum_bcd_reduction,
};
use delsarte::certificates::{
    affine_lp_value, c_matrix, dual_hermitian_forms_even, dual_hermitian_polar_even,
    dual_singleton_affine, dual_singleton_ordinary, dual_transform, epsilon_nd,
    hermitian_forms_even_distributions, hermitian_forms_even_lp_value,
    hermitian_polar_even_distributions, hermitian_polar_even_lp_value,
    inner_distribution_affine, inner_distribution_ordinary, ordinary_lp_value,
    piret_primal_hamming, qc_inverse_product, DistVector,
};
use delsarte::exactq::{q_pochhammer, Rat};
use delsarte::lp::{dual_bound_from_polynomial, lp_opt, singleton_polynomial};
use delsarte::oracle::{
    build_instance, empirical_valencies, max_code_bruteforce, random_subset_dual_check,
    subset_inner_distribution, DEFAULT_SUBSET_SEED,
};
use delsarte::schemes::{make_scheme, SchemeFamily, SchemeSpec};
use std::collections::BTreeSet;
use std::time::Duration;

fn rat(n: i64) -> Rat {
    Rat::from_int(n)
}

fn dual_objective(spec: &SchemeSpec, y: &DistVector) -> Rat {
    (0..=spec.n)
        .map(|k| spec.multiplicity(k) * &y.entries[k])
        .sum()
}

fn pass(criterion: u32, name: &str, checks: usize) {
    println!("criterion {criterion} ({name}): PASS [{checks} exact checks]");
}

/// The scheme grid shared by the identity criteria: all families,
/// q in {2,3}, n <= 4, m <= n+2.
fn full_grid() -> Vec<SchemeSpec> {
    let mut specs = Vec::new();
    for q in [2u32, 3] {
        for n in 1..=4usize {
            specs.push(make_scheme(SchemeFamily::Hamming, q, Some(n), None).unwrap());
            specs.push(make_scheme(SchemeFamily::HermitianForms, q, Some(n), None).unwrap());
            for f in [
                SchemeFamily::PolarA2nMinus1,
                SchemeFamily::PolarA2n,
                SchemeFamily::PolarB,
                SchemeFamily::PolarC,
                SchemeFamily::PolarD,
                SchemeFamily::PolarD2Elliptic,
            ] {
                specs.push(make_scheme(f, q, Some(n), None).unwrap());
            }
            for m in n as u32..=(n as u32 + 2) {
                specs.push(make_scheme(SchemeFamily::QJohnson, q, Some(n), Some(m)).unwrap());
                specs.push(make_scheme(SchemeFamily::Bilinear, q, Some(n), Some(m)).unwrap());
            }
        }
        for m in 2..=8u32 {
            specs.push(make_scheme(SchemeFamily::Alternating, q, None, Some(m)).unwrap());
            specs.push(make_scheme(SchemeFamily::HalfD, q, None, Some(m)).unwrap());
        }
    }
    for n in 1..=4usize {
        for m in n as u32..=(n as u32 + 2) {
            specs.push(make_scheme(SchemeFamily::Johnson, 2, Some(n), Some(m)).unwrap());
        }
    }
    specs
}

/// Four-way equality: closed form, exact simplex optimum, dual certificate
/// objective, inner-distribution certificate total.
fn four_way(
    spec: &SchemeSpec,
    d: usize,
    formula: &Rat,
    dual_cert: &DistVector,
    inner_cert: &DistVector,
) -> usize {
    let solver = lp_opt(spec, d);
    assert_eq!(&solver, formula, "{spec} d={d}: solver vs formula");
    let dual_obj = dual_objective(spec, dual_cert);
    assert_eq!(&dual_obj, formula, "{spec} d={d}: dual certificate vs formula");
    let primal_obj = inner_cert.total();
    assert_eq!(&primal_obj, formula, "{spec} d={d}: primal certificate vs formula");
    // Both certificates must be genuinely feasible.
    assert!(
        inner_cert.entries.iter().all(|a| a.is_nonnegative()),
        "{spec} d={d}: inner entries"
    );
    for i in 1..d {
        assert!(inner_cert.entries[i].is_zero(), "{spec} d={d}: A_{i} != 0");
    }
    let transformed = dual_transform(spec, inner_cert);
    assert!(
        transformed.entries.iter().all(|a| a.is_nonnegative()),
        "{spec} d={d}: dual transform"
    );
    assert!(dual_cert.entries[0].is_one(), "{spec} d={d}: y_0");
    assert!(
        dual_cert.entries.iter().all(|y| y.is_nonnegative()),
        "{spec} d={d}: dual entries"
    );
    for i in d..=spec.n {
        let v: Rat = (0..=spec.n)
            .map(|k| spec.q_number(k, i) * &dual_cert.entries[k])
            .sum();
        assert!(!(-&v).is_negative(), "{spec} d={d}: dual constraint {i}");
    }
    // Complementary slackness at the attained optimum: y_k A'_k = 0.
    for k in 1..=spec.n {
        assert!(
            (&dual_cert.entries[k] * &transformed.entries[k]).is_zero(),
            "{spec} d={d}: slackness at k={k}"
        );
    }
    3
}

#[test]
fn criterion_01_affine_lp_optima() {
    let mut checks = 0;
    for q in [2u32, 3] {
        for n in 1..=4usize {
            for m in n as u32..=(n as u32 + 2) {
                let spec = make_scheme(SchemeFamily::Bilinear, q, Some(n), Some(m)).unwrap();
                for d in 1..=n {
                    let formula = affine_lp_value(&spec, d);
                    let dual = dual_singleton_affine(&spec, d).unwrap();
                    let (inner, _) = inner_distribution_affine(&spec, d).unwrap();
                    checks += four_way(&spec, d, &formula, &dual, &inner);
                }
            }
            let her = make_scheme(SchemeFamily::HermitianForms, q, Some(n), None).unwrap();
            for d in (1..=n).step_by(2) {
                let formula = affine_lp_value(&her, d);
                let dual = dual_singleton_affine(&her, d).unwrap();
                let (inner, _) = inner_distribution_affine(&her, d).unwrap();
                checks += four_way(&her, d, &formula, &dual, &inner);
            }
        }
        for m in 2..=8u32 {
            let alt = make_scheme(SchemeFamily::Alternating, q, None, Some(m)).unwrap();
            for d in 1..=alt.n {
                let formula = affine_lp_value(&alt, d);
                let dual = dual_singleton_affine(&alt, d).unwrap();
                let (inner, _) = inner_distribution_affine(&alt, d).unwrap();
                checks += four_way(&alt, d, &formula, &dual, &inner);
            }
        }
    }
    pass(1, "affine LP optima", checks);
}

#[test]
fn criterion_02_hermitian_forms_even_d() {
    let mut checks = 0;
    for q in [2u32, 3] {
        for n in 2..=5usize {
            let spec = make_scheme(SchemeFamily::HermitianForms, q, Some(n), None).unwrap();
            for d in (2..=n).step_by(2) {
                let formula = hermitian_forms_even_lp_value(&spec, d);
                let dual = dual_hermitian_forms_even(&spec, d).unwrap();
                let (inner, _) = hermitian_forms_even_distributions(&spec, d).unwrap();
                checks += four_way(&spec, d, &formula, &dual, &inner);
            }
        }
    }
    // Spot value: LP(2) = 6 at q = 2, n = 2.
    let spot = make_scheme(SchemeFamily::HermitianForms, 2, Some(2), None).unwrap();
    assert_eq!(hermitian_forms_even_lp_value(&spot, 2), rat(6));
    assert_eq!(lp_opt(&spot, 2), rat(6));
    pass(2, "even-d Hermitian forms", checks + 2);
}

#[test]
fn criterion_03_ordinary_q_analogs() {
    let mut checks = 0;
    for q in [2u32, 3] {
        for n in 1..=3usize {
            for m in n as u32..=4 {
                let spec = make_scheme(SchemeFamily::QJohnson, q, Some(n), Some(m)).unwrap();
                for d in 1..=n {
                    let formula = ordinary_lp_value(&spec, d);
                    let dual = dual_singleton_ordinary(&spec, d).unwrap();
                    let (inner, _) = inner_distribution_ordinary(&spec, d).unwrap();
                    checks += four_way(&spec, d, &formula, &dual, &inner);
                }
            }
        }
        for n in 1..=4usize {
            let spec = make_scheme(SchemeFamily::PolarA2nMinus1, q, Some(n), None).unwrap();
            for d in 1..=n {
                if d % 2 == 1 {
                    let formula = ordinary_lp_value(&spec, d);
                    let dual = dual_singleton_ordinary(&spec, d).unwrap();
                    let (inner, _) = inner_distribution_ordinary(&spec, d).unwrap();
                    checks += four_way(&spec, d, &formula, &dual, &inner);
                } else {
                    let formula = hermitian_polar_even_lp_value(&spec, d).unwrap();
                    let dual = dual_hermitian_polar_even(&spec, d).unwrap();
                    let (inner, _) = hermitian_polar_even_distributions(&spec, d).unwrap();
                    checks += four_way(&spec, d, &formula, &dual, &inner);
                }
            }
        }
        for m in 2..=8u32 {
            let spec = make_scheme(SchemeFamily::HalfD, q, None, Some(m)).unwrap();
            for d in 1..=spec.n {
                let formula = ordinary_lp_value(&spec, d);
                let dual = dual_singleton_ordinary(&spec, d).unwrap();
                let (inner, _) = inner_distribution_ordinary(&spec, d).unwrap();
                checks += four_way(&spec, d, &formula, &dual, &inner);
            }
        }
    }
    // Spot values: LP(2) = 5 for J_2(2,2); LP(2) = 9 for the rank-2
    // Hermitian polar space over q = 2.
    let qj = make_scheme(SchemeFamily::QJohnson, 2, Some(2), Some(2)).unwrap();
    assert_eq!(lp_opt(&qj, 2), rat(5));
    let pol = make_scheme(SchemeFamily::PolarA2nMinus1, 2, Some(2), None).unwrap();
    assert_eq!(lp_opt(&pol, 2), rat(9));
    pass(3, "ordinary q-analogs", checks + 2);
}

#[test]
fn criterion_04_bcd_corollary() {
    let mut checks = 0;
    for q in [2u32, 3] {
        for n in 1..=4usize {
            for fam in [SchemeFamily::PolarB, SchemeFamily::PolarC] {
                for d in (1..=n).step_by(2) {
                    let closed = lp_optimum_bcd(fam, q, n, d).unwrap();
                    let reduced = lp_optimum_bcd_reduction(fam, q, n, d).unwrap();
                    let direct = lp_optimum_bcd_direct(fam, q, n, d).unwrap();
                    assert_eq!(closed, reduced, "{fam} q={q} n={n} d={d}: reduction");
                    assert_eq!(closed, direct, "{fam} q={q} n={n} d={d}: direct");
                    checks += 2;
                }
            }
            for d in (2..=n).step_by(2) {
                let closed = lp_optimum_bcd(SchemeFamily::PolarD, q, n, d).unwrap();
                let reduced = lp_optimum_bcd_reduction(SchemeFamily::PolarD, q, n, d).unwrap();
                let direct = lp_optimum_bcd_direct(SchemeFamily::PolarD, q, n, d).unwrap();
                assert_eq!(closed, reduced, "polar-d q={q} n={n} d={d}: reduction");
                assert_eq!(closed, direct, "polar-d q={q} n={n} d={d}: direct");
                checks += 2;
            }
        }
    }
    // Spot value: LP(3) = 9 for C_3 over q = 2.
    assert_eq!(lp_optimum_bcd(SchemeFamily::PolarC, 2, 3, 3).unwrap(), rat(9));
    pass(4, "B_n/C_n/D_n corollary", checks + 1);
}

#[test]
fn criterion_05_hamming() {
    let mut checks = 0;
    for n in 1..=5usize {
        for d in 1..=n {
            for q in 2..=7u32 {
                if (q as usize) < d.max(n - d + 2) {
                    continue;
                }
                let spec = make_scheme(SchemeFamily::Hamming, q, Some(n), None).unwrap();
                let target = spec.q_rat().pow((n - d + 1) as i64);
                let piret = piret_primal_hamming(n, q, d).unwrap();
                assert_eq!(piret.total(), target, "H({n},{q}) d={d}: Piret objective");
                // Piret feasibility against the Krawtchouk constraints.
                let transformed = dual_transform(&spec, &piret);
                assert!(
                    transformed.entries.iter().all(|a| a.is_nonnegative()),
                    "H({n},{q}) d={d}: Piret feasibility"
                );
                let poly = singleton_polynomial(&spec.z_points(), d);
                let dist: BTreeSet<usize> = (d..=n).collect();
                let bound = dual_bound_from_polynomial(&spec, &poly, &dist).unwrap();
                assert!(bound.feasible, "H({n},{q}) d={d}: Singleton feasibility");
                assert_eq!(bound.objective, target, "H({n},{q}) d={d}: Singleton objective");
                assert_eq!(lp_opt(&spec, d), target, "H({n},{q}) d={d}: solver");
                checks += 4;
            }
        }
    }
    let spot = make_scheme(SchemeFamily::Hamming, 4, Some(3), None).unwrap();
    assert_eq!(lp_opt(&spot, 2), rat(16));
    pass(5, "Hamming scheme", checks + 1);
}

/// Exact inverse by Gauss-Jordan elimination, kept independent of the
/// closed-form inverse it cross-checks.
fn gauss_inverse(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("matrix is invertible");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= &delta;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

#[test]
fn criterion_06_identity_suite() {
    let mut checks = 0usize;
    let qb = |n: i64, k: i64, b: &Rat| delsarte::exactq::q_binomial(n, k, b).unwrap();
    for spec in full_grid() {
        let n = spec.n;
        let x = spec.x_size();
        // PQ orthogonality and the duality relation.
        for i in 0..=n {
            for j in 0..=n {
                let s: Rat = (0..=n)
                    .map(|k| spec.p_number(i, k) * spec.q_number(k, j))
                    .sum();
                let expect = if i == j { x.clone() } else { Rat::zero() };
                assert_eq!(s, expect, "{spec}: PQ orthogonality ({i},{j})");
            }
        }
        for i in 0..=n {
            for k in 0..=n {
                assert_eq!(
                    spec.multiplicity(k) * spec.p_number(i, k),
                    spec.valency(i) * spec.q_number(k, i),
                    "{spec}: duality ({i},{k})"
                );
            }
        }
        // The two orthogonality relations.
        for a in 0..=n {
            for b in 0..=n {
                let s1: Rat = (0..=n)
                    .map(|k| spec.multiplicity(k) * spec.p_number(a, k) * spec.p_number(b, k))
                    .sum();
                let e1 = if a == b { &x * &spec.valency(a) } else { Rat::zero() };
                assert_eq!(s1, e1, "{spec}: first orthogonality ({a},{b})");
                let s2: Rat = (0..=n)
                    .map(|i| spec.valency(i) * spec.q_number(a, i) * spec.q_number(b, i))
                    .sum();
                let e2 = if a == b { &x * &spec.multiplicity(a) } else { Rat::zero() };
                assert_eq!(s2, e2, "{spec}: second orthogonality ({a},{b})");
            }
        }
        checks += 4 * (n + 1) * (n + 1);

        let ni = n as i64;
        if spec.family.is_ordinary() {
            let b = spec.b();
            let qc = spec.q_rat() * spec.c();
            for j in 0..=ni {
                for k in 0..=ni {
                    let lhs: Rat = (0..=n)
                        .map(|i| qb(ni - i as i64, j, b) * spec.p_number(i, k as usize))
                        .sum();
                    let rhs = b.pow(k * (ni - j))
                        * qb(ni - k, ni - j, b)
                        * q_pochhammer(&(&qc * &b.pow(ni - k)), (ni - j) as u64, b)
                        / q_pochhammer(&spec.q_rat(), (ni - j) as u64, b);
                    assert_eq!(lhs, rhs, "{spec}: P-number identity ({j},{k})");
                    checks += 1;
                }
            }
            // Q-number identity.
            for i in 0..=ni {
                for j in 0..=ni {
                    let lhs: Rat = (0..=n)
                        .map(|k| {
                            let ki = k as i64;
                            b.pow(ki * (ni - j))
                                * qb(ni - ki, ni - j, b)
                                * q_pochhammer(&(&qc * &b.pow(ni - ki)), (ni - j) as u64, b)
                                / q_pochhammer(&spec.q_rat(), (ni - j) as u64, b)
                                * spec.q_number(k, i as usize)
                        })
                        .sum();
                    assert_eq!(lhs, &x * &qb(ni - i, j, b), "{spec}: Q identity ({i},{j})");
                    checks += 1;
                }
            }
            // QC^{-1}: against C by multiplication and against the direct
            // Gauss-Jordan inverse of C.
            let qc_closed = qc_inverse_product(&spec).unwrap();
            let c = c_matrix(n, b);
            for k in 0..=n {
                for i in 0..=n {
                    let s: Rat = (0..=n).map(|j| &qc_closed[k][j] * &c[j][i]).sum();
                    assert_eq!(s, spec.q_number(k, i), "{spec}: (QC^-1) C = Q at ({k},{i})");
                    checks += 1;
                }
            }
            let c_inv = gauss_inverse(&c);
            for k in 0..=n {
                for j in 0..=n {
                    let s: Rat = (0..=n).map(|i| spec.q_number(k, i) * &c_inv[i][j]).sum();
                    assert_eq!(s, qc_closed[k][j], "{spec}: QC^-1 direct at ({k},{j})");
                    checks += 1;
                }
            }
        }
        if spec.family.is_affine() {
            let b = spec.b();
            let cbn = spec.cbn();
            for j in 0..=ni {
                for k in 0..=ni {
                    let lhs: Rat = (0..=n)
                        .map(|i| qb(ni - i as i64, j, b) * spec.p_number(i, k as usize))
                        .sum();
                    assert_eq!(
                        lhs,
                        qb(ni - k, ni - j, b) * cbn.pow(ni - j),
                        "{spec}: affine identity ({j},{k})"
                    );
                    checks += 1;
                }
            }
        }
    }
    pass(6, "identity suite", checks);
}

#[test]
fn criterion_07_nonnegativity() {
    let mut checks = 0usize;
    let mut assert_nonneg = |v: &DistVector, ctx: String| {
        for (i, e) in v.entries.iter().enumerate() {
            assert!(e.is_nonnegative(), "{ctx}: entry {i} = {e}");
        }
        checks += v.entries.len();
    };
    for spec in full_grid() {
        for d in 1..=spec.n {
            let pair = match spec.family {
                f if f.is_affine() => {
                    if spec.family == SchemeFamily::HermitianForms && d % 2 == 0 {
                        hermitian_forms_even_distributions(&spec, d).unwrap()
                    } else {
                        inner_distribution_affine(&spec, d).unwrap()
                    }
                }
                f if f.is_ordinary() => {
                    if spec.family == SchemeFamily::PolarA2nMinus1 && d % 2 == 0 {
                        hermitian_polar_even_distributions(&spec, d).unwrap()
                    } else {
                        inner_distribution_ordinary(&spec, d).unwrap()
                    }
                }
                _ => continue,
            };
            assert_nonneg(&pair.0, format!("{spec} d={d} inner"));
            assert_nonneg(&pair.1, format!("{spec} d={d} dual"));
        }
    }
    // The cases that needed machine checks in the source analysis:
    // even-d Hermitian instances for q in {2,3} and n up to 7, both schemes.
    for q in [2u32, 3] {
        for n in 4..=7usize {
            let her = make_scheme(SchemeFamily::HermitianForms, q, Some(n), None).unwrap();
            let pol = make_scheme(SchemeFamily::PolarA2nMinus1, q, Some(n), None).unwrap();
            for d in (2..=n).step_by(2) {
                let (inner, dual) = hermitian_forms_even_distributions(&her, d).unwrap();
                assert_nonneg(&inner, format!("{her} d={d} inner"));
                assert_nonneg(&dual, format!("{her} d={d} dual"));
                let (inner, dual) = hermitian_polar_even_distributions(&pol, d).unwrap();
                assert_nonneg(&inner, format!("{pol} d={d} inner"));
                assert_nonneg(&dual, format!("{pol} d={d} dual"));
            }
        }
    }
    pass(7, "nonnegativity suite", checks);
}

#[test]
fn criterion_08_ekr_suite() {
    let mut checks = 0usize;
    for spec in full_grid() {
        let t_max = match spec.family {
            SchemeFamily::Alternating | SchemeFamily::HalfD => spec.m.unwrap() as usize,
            _ => spec.n,
        };
        for t in 1..=t_max {
            match (ekr_closed_form(&spec, t), ekr_bound(&spec, t)) {
                (Ok(a), Ok(b)) => {
                    assert_eq!(a, b, "{spec} t={t}: closed form vs |X|/LP");
                    checks += 1;
                }
                (Err(_), Err(_)) => {}
                (a, b) => panic!("{spec} t={t}: route admissibility differs: {a:?} vs {b:?}"),
            }
        }
    }
    // Spot value: 1-intersecting lines in F_2^4.
    let qj = make_scheme(SchemeFamily::QJohnson, 2, Some(2), Some(2)).unwrap();
    assert_eq!(ekr_bound(&qj, 1).unwrap(), rat(7));
    // Simplified bounds dominate the exact ones wherever both apply.
    for q in [2u32, 3] {
        for n in 3..=7usize {
            for t in 2..n {
                for fam in [
                    SchemeFamily::PolarA2nMinus1,
                    SchemeFamily::PolarB,
                    SchemeFamily::PolarC,
                    SchemeFamily::PolarD,
                ] {
                    let Ok(simple) = ekr_simple_bound(fam, q, n, t) else {
                        continue;
                    };
                    let spec = make_scheme(fam, q, Some(n), None).unwrap();
                    let exact = ekr_bound(&spec, t).unwrap();
                    assert!(exact <= simple, "{fam} q={q} n={n} t={t}: {exact} > {simple}");
                    checks += 1;
                }
            }
        }
    }
    pass(8, "EKR suite", checks + 1);
}

#[test]
fn criterion_09_oracle_agreement() {
    let mut checks = 0usize;
    // Every buildable matrix-scheme instance on the grid (default cap):
    // empirical valencies must match the tables.
    let mut instances = Vec::new();
    for q in [2u32, 3] {
        for n in 1..=4usize {
            for m in n as u32..=(n as u32 + 2) {
                instances.push((SchemeFamily::Bilinear, q, Some(n), Some(m)));
            }
            instances.push((SchemeFamily::HermitianForms, q, Some(n), None));
        }
        for m in 2..=8u32 {
            instances.push((SchemeFamily::Alternating, q, None, Some(m)));
        }
    }
    let mut built = Vec::new();
    for (family, q, n, m) in instances {
        match build_instance(family, q, n, m, 4096) {
            Ok(inst) => built.push(inst),
            Err(_) => continue, // over the cap
        }
    }
    assert!(built.len() >= 15, "expected a meaningful instance set");
    for inst in &built {
        let counts = empirical_valencies(inst);
        for (i, c) in counts.iter().enumerate() {
            assert_eq!(*c, inst.spec.valency(i), "{} class {i}", inst.spec);
            checks += 1;
        }
    }

    // Idempotent relation D_i E_k = P_i(k) E_k on the instances small
    // enough for the dense check.
    for inst in built.iter().filter(|i| i.num_vertices() <= 128) {
        for i in 0..=inst.spec.n {
            let evs = delsarte::oracle::empirical_eigenvalues(inst, i).unwrap();
            for k in 0..=inst.spec.n {
                assert_eq!(evs[k], inst.spec.p_number(i, k), "{} ({i},{k})", inst.spec);
                checks += 1;
            }
        }
    }

    // Maximum-code search never exceeds the LP optimum; equality is
    // witnessed at Bil(2; 2, 2) with d = 2.
    let budget = Duration::from_secs(60);
    for inst in built.iter().filter(|i| i.num_vertices() <= 100) {
        for d in 2..=inst.spec.n {
            let (size, witness) = max_code_bruteforce(inst, d, budget).unwrap();
            let bound = lp_opt(&inst.spec, d);
            assert!(
                Rat::from_int(size as i64) <= bound,
                "{} d={d}: {size} > {bound}",
                inst.spec
            );
            for &a in &witness {
                for &b in &witness {
                    assert!(a == b || inst.distance(a, b) >= d, "{} d={d}", inst.spec);
                }
            }
            checks += 1;
        }
    }
    let bil = build_instance(SchemeFamily::Bilinear, 2, Some(2), Some(2), 4096).unwrap();
    let (size, witness) = max_code_bruteforce(&bil, 2, budget).unwrap();
    assert_eq!(size, 4, "Bil(2;2,2) d=2 meets the LP optimum");
    let inner = subset_inner_distribution(&bil, &witness);
    let (expected, _) = inner_distribution_affine(&bil.spec, 2).unwrap();
    assert_eq!(inner, expected, "witness inner distribution");

    // 200 random subsets per small instance: dual distributions are
    // nonnegative, exactly.
    for inst in built.iter().filter(|i| i.num_vertices() <= 256) {
        let report = random_subset_dual_check(inst, 200, DEFAULT_SUBSET_SEED);
        assert!(
            report.all_nonnegative,
            "{}: min dual entry {}",
            inst.spec, report.min_dual_entry
        );
        checks += report.trials;
    }
    pass(9, "oracle agreement", checks + 2);
}

#[test]
fn criterion_10_inequality_lemmas() {
    let mut checks = 0usize;
    // epsilon(n, d) bounds, even d <= n <= 8, q in {2, 3, 4}.
    for q in [2u32, 3, 4] {
        let qr = Rat::from_int(q as i64);
        for n in 2..=8usize {
            for d in (2..=n).step_by(2) {
                let eps = epsilon_nd(n, d, q).unwrap();
                let ni = n as i64;
                let di = d as i64;
                if n % 2 == 0 {
                    let lower = -(qr.pow(ni + di - 1) + Rat::one()) / (qr.pow(di - 1) - Rat::one());
                    let upper = -&qr.pow(ni) / (&qr + &Rat::one());
                    assert!(eps > lower, "q={q} n={n} d={d}: even lower");
                    assert!(eps < upper, "q={q} n={n} d={d}: even upper");
                } else {
                    let lower =
                        Rat::new(1, 2) * qr.pow(di - 2) * (qr.pow(ni - di + 1) - Rat::one());
                    let upper = (qr.pow(ni + di - 1) - Rat::one()) / (qr.pow(di - 1) - Rat::one());
                    assert!(eps > lower, "q={q} n={n} d={d}: odd lower");
                    assert!(eps < upper, "q={q} n={n} d={d}: odd upper");
                }
                checks += 2;
            }
        }
    }
    // Partial products of (1 +- q^{-i}) stay within (1/4, 5/2) for n <= 20.
    for q in [2u32, 3, 4] {
        let qr = Rat::from_int(q as i64);
        let mut plus = Rat::one();
        let mut minus = Rat::one();
        for i in 1..=20i64 {
            plus *= &(Rat::one() + qr.pow(-i));
            minus *= &(Rat::one() - qr.pow(-i));
            assert!(plus < Rat::new(5, 2), "q={q} n={i}: product upper");
            assert!(minus >= Rat::new(1, 4), "q={q} n={i}: product lower");
            checks += 2;
        }
    }
    // Code-size sandwich on the even-d Hermitian forms grid.
    for q in [2u32, 3] {
        for n in 2..=7usize {
            let spec = make_scheme(SchemeFamily::HermitianForms, q, Some(n), None).unwrap();
            for d in (2..=n).step_by(2) {
                let size = hermitian_forms_even_lp_value(&spec, d);
                let base = Rat::from_int(q as i64).pow((n * (n - d + 2)) as i64);
                assert!(
                    &base / &rat(3) <= &size * &Rat::from_int(q as i64),
                    "q={q} n={n} d={d}: sandwich lower"
                );
                assert!(size <= &base / &rat(2), "q={q} n={n} d={d}: sandwich upper");
                checks += 2;
            }
        }
    }
    pass(10, "inequality lemmas", checks);
}
