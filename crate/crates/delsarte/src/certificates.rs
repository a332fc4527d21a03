//! Closed-form primal and dual feasible solutions: Singleton-type dual
//! certificates, inner/dual distributions of extremal codes, the QC^{-1}
//! product, epsilon(n, d), and the strong-duality verdict.
//!
//! Certificates are generated from their finite-sum formulas, never read back
//! from the solver; the exact simplex acts as an independent referee in the
//! test suites. Empty sums evaluate to 0 and empty products to 1, which is
//! exactly the boundary behaviour the formulas require (`d = n`, `i > n-d`).

use crate::exactq::{binom, binom2, q_binomial, q_pochhammer, Rat};
use crate::lp::{dual_bound_from_polynomial, singleton_polynomial};
use crate::schemes::{SchemeFamily, SchemeSpec};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DistKind {
    Inner,
    Dual,
    PrimalSolution,
    DualSolution,
}

/// A length-(n+1) rational vector indexed by class or eigenspace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistVector {
    pub entries: Vec<Rat>,
    pub kind: DistKind,
}

impl DistVector {
    pub fn new(entries: Vec<Rat>, kind: DistKind) -> Self {
        DistVector { entries, kind }
    }

    pub fn total(&self) -> Rat {
        self.entries.iter().cloned().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertError {
    #[error("even d in the Hermitian forms scheme: use the dedicated even-d operation")]
    HermitianFormsEvenD,
    #[error("even d in the Hermitian polar scheme: use the dedicated even-d operation")]
    HermitianPolarEvenD,
    #[error("d must be even for this operation")]
    RequiresEvenD,
    #[error("d = {d} out of range 1..={n}")]
    DOutOfRange { d: usize, n: usize },
    #[error("family {0} is not covered by this operation")]
    UnsupportedFamily(SchemeFamily),
    #[error("Piret condition fails: q = {q} < max{{d, n-d+2}} = {need}")]
    PiretConditionFails { q: u32, need: u32 },
    #[error("degenerate certificate: F_0 = 0")]
    DegenerateCertificate,
}

/// A violated constraint found while checking a certificate pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
pub enum VerifyFailure {
    #[error("primal entry A_{index} = {value} is negative")]
    PrimalEntryNegative { index: usize, value: Rat },
    #[error("dual transform entry A'_{index} = {value} is negative")]
    PrimalTransformNegative { index: usize, value: Rat },
    #[error("dual certificate entry y_{index} = {value} is negative")]
    DualEntryNegative { index: usize, value: Rat },
    #[error("dual constraint at class {index} evaluates to {value} > 0")]
    DualConstraintViolated { index: usize, value: Rat },
    #[error("objective gap: primal {primal} != dual {dual}")]
    ObjectiveGap { primal: Rat, dual: Rat },
    #[error("certificate construction failed: {0}")]
    Construction(String),
}

/// Matching primal/dual certificates for one `(scheme, d)` instance.
#[derive(Debug, Clone, Serialize)]
pub struct CertificatePair {
    pub scheme: String,
    pub family: SchemeFamily,
    pub q: u32,
    pub n: usize,
    pub m: Option<u32>,
    pub d: usize,
    pub primal: DistVector,
    pub dual: DistVector,
    pub primal_objective: Rat,
    pub dual_objective: Rat,
    pub duality_gap_zero: bool,
}

fn qb(n: i64, k: i64, base: &Rat) -> Rat {
    q_binomial(n, k, base).expect("validated scheme base")
}

fn sign(parity: i64) -> Rat {
    Rat::from_int(if parity.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn check_d(spec: &SchemeSpec, d: usize) -> Result<(), CertError> {
    if d < 1 || d > spec.n {
        Err(CertError::DOutOfRange { d, n: spec.n })
    } else {
        Ok(())
    }
}

/// The dual distribution of a hypothetical subset with inner distribution
/// `inner`: `A'_k = sum_i Q_k(i) A_i`.
pub fn dual_transform(spec: &SchemeSpec, inner: &DistVector) -> DistVector {
    let entries = (0..=spec.n)
        .map(|k| {
            (0..=spec.n)
                .map(|i| spec.q_number(k, i) * &inner.entries[i])
                .sum()
        })
        .collect();
    DistVector::new(entries, DistKind::Dual)
}

/// `epsilon(n, d)` of the even-d Hermitian polar optimum.
pub fn epsilon_nd(n: usize, d: usize, q: u32) -> Result<Rat, CertError> {
    if d % 2 != 0 {
        return Err(CertError::RequiresEvenD);
    }
    if d < 2 || d > n {
        return Err(CertError::DOutOfRange { d, n });
    }
    let ni = n as i64;
    let di = d as i64;
    let qr = Rat::from_int(q as i64);
    let mq = -&qr;
    let head = mq.pow(ni - di + 2) - Rat::one();
    let tail = mq.pow(ni - di + 1) - Rat::one();
    let mid = mq.pow(ni + di - 2) - Rat::one();
    let num = &head + &(&qr * &mid / (&qr * &mq.pow(di - 2) - Rat::one()) * &tail);
    let den = &head + &(&qr * &mid / (mq.pow(ni + di - 1) - Rat::one()) * &tail);
    Ok(num / den)
}

/// The affine LP optimum `(c b^n)^{n-d+1}`.
pub fn affine_lp_value(spec: &SchemeSpec, d: usize) -> Rat {
    spec.cbn().pow((spec.n - d + 1) as i64)
}

/// The even-d Hermitian forms LP optimum.
pub fn hermitian_forms_even_lp_value(spec: &SchemeSpec, d: usize) -> Rat {
    let b = spec.b();
    let ni = spec.n as i64;
    let di = d as i64;
    let num = (b.pow(ni - di + 2) - Rat::one())
        + b.pow(ni) * (b.pow(ni - di + 1) - Rat::one());
    let den = b.pow(ni - di + 2) - b.pow(ni - di + 1);
    affine_lp_value(spec, d) * num / den
}

/// The ordinary-scheme LP optimum `|X| (q; b)_{d-1} / (q c b^n; b)_{d-1}`.
pub fn ordinary_lp_value(spec: &SchemeSpec, d: usize) -> Rat {
    let b = spec.b();
    let q = spec.q_rat();
    let qcbn = &q * spec.c() * &b.pow(spec.n as i64);
    spec.x_size() * q_pochhammer(&q, (d - 1) as u64, b)
        / q_pochhammer(&qcbn, (d - 1) as u64, b)
}

/// The even-d Hermitian polar LP optimum, including the epsilon factor.
pub fn hermitian_polar_even_lp_value(spec: &SchemeSpec, d: usize) -> Result<Rat, CertError> {
    Ok(ordinary_lp_value(spec, d) * epsilon_nd(spec.n, d, spec.q)?)
}

/// Singleton dual certificate for the matrix schemes:
/// `y_k = F_k / F_0` with `F_k = [n-k, d-1]_b`.
pub fn dual_singleton_affine(spec: &SchemeSpec, d: usize) -> Result<DistVector, CertError> {
    if !spec.family.is_affine() {
        return Err(CertError::UnsupportedFamily(spec.family));
    }
    check_d(spec, d)?;
    if spec.family == SchemeFamily::HermitianForms && d % 2 == 0 {
        return Err(CertError::HermitianFormsEvenD);
    }
    let b = spec.b();
    let ni = spec.n as i64;
    let di = d as i64;
    let f0 = qb(ni, di - 1, b);
    let entries = (0..=ni).map(|k| qb(ni - k, di - 1, b) / &f0).collect();
    Ok(DistVector::new(entries, DistKind::DualSolution))
}

/// Singleton dual certificate for the ordinary q-analogs:
/// `F_k = (1/|X|) b^{k(d-1)} [n-k, d-1]_b (qc b^{n-k}; b)_{d-1} / (q; b)_{d-1}`.
pub fn dual_singleton_ordinary(spec: &SchemeSpec, d: usize) -> Result<DistVector, CertError> {
    if !spec.family.is_ordinary() {
        return Err(CertError::UnsupportedFamily(spec.family));
    }
    check_d(spec, d)?;
    if spec.family == SchemeFamily::PolarA2nMinus1 && d % 2 == 0 {
        return Err(CertError::HermitianPolarEvenD);
    }
    let b = spec.b();
    let ni = spec.n as i64;
    let di = d as i64;
    let qc = spec.q_rat() * spec.c();
    let f = |k: i64| -> Rat {
        b.pow(k * (di - 1))
            * qb(ni - k, di - 1, b)
            * q_pochhammer(&(&qc * &b.pow(ni - k)), (d - 1) as u64, b)
    };
    let f0 = f(0);
    let entries = (0..=ni).map(|k| f(k) / &f0).collect();
    Ok(DistVector::new(entries, DistKind::DualSolution))
}

/// Even-d dual certificate for the Hermitian forms scheme, built from two
/// Singleton polynomials; `F_1 = 0` always.
pub fn dual_hermitian_forms_even(spec: &SchemeSpec, d: usize) -> Result<DistVector, CertError> {
    if spec.family != SchemeFamily::HermitianForms {
        return Err(CertError::UnsupportedFamily(spec.family));
    }
    check_d(spec, d)?;
    if d % 2 != 0 {
        return Err(CertError::RequiresEvenD);
    }
    let b = spec.b();
    let ni = spec.n as i64;
    let di = d as i64;
    let f = |k: i64| -> Rat {
        qb(ni - 1, di - 2, b) * qb(ni - k, di - 1, b)
            - qb(ni - 1, di - 1, b) * qb(ni - k, di - 2, b)
    };
    let f0 = f(0);
    if f0.is_zero() {
        return Err(CertError::DegenerateCertificate);
    }
    let entries: Vec<Rat> = (0..=ni).map(|k| f(k) / &f0).collect();
    debug_assert!(spec.n < 1 || entries[1].is_zero());
    Ok(DistVector::new(entries, DistKind::DualSolution))
}

/// Even-d dual certificate for the Hermitian polar scheme (second ordering);
/// `F_1 = 0` always.
pub fn dual_hermitian_polar_even(spec: &SchemeSpec, d: usize) -> Result<DistVector, CertError> {
    if spec.family != SchemeFamily::PolarA2nMinus1 {
        return Err(CertError::UnsupportedFamily(spec.family));
    }
    check_d(spec, d)?;
    if d % 2 != 0 {
        return Err(CertError::RequiresEvenD);
    }
    let b = spec.b();
    let q = spec.q_rat();
    let ni = spec.n as i64;
    let di = d as i64;
    let weight = (b.pow(ni + di - 2) - Rat::one()) / (&q * &b.pow(di - 2) - Rat::one());
    let p1 = q_pochhammer(&q, (d - 1) as u64, b);
    let p2 = q_pochhammer(&q, (d - 2) as u64, b);
    let f = |k: i64| -> Rat {
        let t1 = b.pow(k * (di - 1))
            * q_pochhammer(&b.pow(ni - k + 1), (d - 1) as u64, b)
            / &p1
            * qb(ni - 1, di - 2, b)
            * qb(ni - k, di - 1, b);
        let t2 = b.pow(k * (di - 2) + 1)
            * &weight
            * q_pochhammer(&b.pow(ni - k + 1), (d - 2) as u64, b)
            / &p2
            * qb(ni - 1, di - 1, b)
            * qb(ni - k, di - 2, b);
        t1 - t2
    };
    let f0 = f(0);
    if f0.is_zero() {
        return Err(CertError::DegenerateCertificate);
    }
    let entries: Vec<Rat> = (0..=ni).map(|k| f(k) / &f0).collect();
    debug_assert!(spec.n < 1 || entries[1].is_zero());
    Ok(DistVector::new(entries, DistKind::DualSolution))
}

/// Inner and dual distribution of an extremal odd-d (or Bilinear/Alternating
/// any-d) code in a matrix scheme. The code is an `(n-d+1)`-design.
pub fn inner_distribution_affine(
    spec: &SchemeSpec,
    d: usize,
) -> Result<(DistVector, DistVector), CertError> {
    if !spec.family.is_affine() {
        return Err(CertError::UnsupportedFamily(spec.family));
    }
    check_d(spec, d)?;
    if spec.family == SchemeFamily::HermitianForms && d % 2 == 0 {
        return Err(CertError::HermitianFormsEvenD);
    }
    let b = spec.b();
    let cbn = spec.cbn();
    let ni = spec.n as i64;
    let di = d as i64;

    let mut inner = vec![Rat::zero(); spec.n + 1];
    inner[0] = Rat::one();
    for i in 0..ni {
        let mut acc = Rat::zero();
        for j in i..=(ni - di) {
            acc += &(sign(j - i)
                * b.pow(binom2(j - i))
                * qb(j, i, b)
                * qb(ni, j, b)
                * (cbn.pow(ni - di + 1 - j) - Rat::one()));
        }
        inner[(ni - i) as usize] = acc;
    }

    let size = affine_lp_value(spec, d);
    let mut dual = vec![Rat::zero(); spec.n + 1];
    dual[0] = size.clone();
    for i in 0..ni {
        let mut acc = Rat::zero();
        for j in i..=(di - 2) {
            acc += &(sign(j - i)
                * b.pow(binom2(j - i))
                * qb(j, i, b)
                * qb(ni, j, b)
                * (cbn.pow(di - 1 - j) - Rat::one()));
        }
        dual[(ni - i) as usize] = &size * &acc;
    }

    Ok((
        DistVector::new(inner, DistKind::Inner),
        DistVector::new(dual, DistKind::Dual),
    ))
}

/// Inner and dual distribution of an extremal code in an ordinary q-analog
/// (second ordering for the Hermitian polar scheme; odd d there).
pub fn inner_distribution_ordinary(
    spec: &SchemeSpec,
    d: usize,
) -> Result<(DistVector, DistVector), CertError> {
    if !spec.family.is_ordinary() {
        return Err(CertError::UnsupportedFamily(spec.family));
    }
    check_d(spec, d)?;
    if spec.family == SchemeFamily::PolarA2nMinus1 && d % 2 == 0 {
        return Err(CertError::HermitianPolarEvenD);
    }
    let b = spec.b();
    let q = spec.q_rat();
    let qc = &q * spec.c();
    let qcbn = &qc * &b.pow(spec.n as i64);
    let ni = spec.n as i64;
    let di = d as i64;
    let poch_q = |len: i64| q_pochhammer(&q, len as u64, b);
    let poch_qcbn = |len: i64| q_pochhammer(&qcbn, len as u64, b);

    let mut inner = vec![Rat::zero(); spec.n + 1];
    inner[0] = Rat::one();
    for i in 0..ni {
        let mut acc = Rat::zero();
        for j in i..=(ni - di) {
            let ratio = poch_qcbn(ni - j) * poch_q(di - 1) / (poch_qcbn(di - 1) * poch_q(ni - j));
            acc += &(sign(j - i)
                * b.pow(binom2(j - i))
                * qb(j, i, b)
                * qb(ni, j, b)
                * (ratio - Rat::one()));
        }
        inner[(ni - i) as usize] = acc;
    }

    let size = ordinary_lp_value(spec, d);
    let mut dual = vec![Rat::zero(); spec.n + 1];
    dual[0] = size;
    for k in 0..ni {
        let mu = spec.multiplicity((ni - k) as usize);
        let c_k = mu
            * (-(q.recip()) * b.pow(-ni + 1)).pow(ni - k)
            * q_pochhammer(&(&q * &b.pow(k)), (ni - k) as u64, b)
            * q_pochhammer(
                &(q.recip() * spec.c().recip() * b.pow(-ni - k)),
                (ni - k) as u64,
                b,
            )
            / q_pochhammer(&(spec.c().recip() * b.pow(-ni)), (ni - k) as u64, b)
            / q_pochhammer(&(q.recip() * b.pow(1 - ni)), (ni - k) as u64, b);
        let mut acc = Rat::zero();
        for j in 0..=(di - 2 - k) {
            let head = q_pochhammer(&(&q * &b.pow(k)), j as u64, b)
                / q_pochhammer(&(&qc * &b.pow(2 * k + 1)), j as u64, b);
            let tail = q_pochhammer(&(&q * &b.pow(k + j)), (di - k - j - 1) as u64, b)
                / q_pochhammer(&(&qc * &b.pow(ni + k + j)), (di - k - j - 1) as u64, b);
            acc += &(sign(j)
                * b.pow(binom2(ni - k - j))
                * head
                * qb(ni - k, j, b)
                * (Rat::one() - tail));
        }
        dual[(ni - k) as usize] = c_k * acc;
    }

    Ok((
        DistVector::new(inner, DistKind::Inner),
        DistVector::new(dual, DistKind::Dual),
    ))
}

/// Inner and dual distribution of an extremal even-d code in the Hermitian
/// forms scheme. Not a design: `A'_1 > 0` in general.
pub fn hermitian_forms_even_distributions(
    spec: &SchemeSpec,
    d: usize,
) -> Result<(DistVector, DistVector), CertError> {
    if spec.family != SchemeFamily::HermitianForms {
        return Err(CertError::UnsupportedFamily(spec.family));
    }
    check_d(spec, d)?;
    if d % 2 != 0 {
        return Err(CertError::RequiresEvenD);
    }
    let b = spec.b();
    let ni = spec.n as i64;
    let di = d as i64;
    let size = hermitian_forms_even_lp_value(spec, d);
    let qn = Rat::from_int(spec.q as i64).pow(ni * (ni - di + 1));
    let design_ratio = |x: i64| (b.pow(x) - Rat::one()) / (b.pow(ni - di + 1) - Rat::one());

    let mut inner = vec![Rat::zero(); spec.n + 1];
    inner[0] = Rat::one();
    for i in 0..ni {
        let mut acc = Rat::zero();
        for j in i..=(ni - di) {
            let sz = sign(j) * &size / b.pow(ni * j);
            let term = &sz - &Rat::one()
                - design_ratio(j) * (&sz + &(sign(ni + j) * b.pow(ni * (ni - di + 1 - j))));
            acc += &(sign(j - i) * b.pow(binom2(j - i)) * qb(j, i, b) * qb(ni, j, b) * term);
        }
        inner[(ni - i) as usize] = acc;
    }

    let a1 = design_ratio(ni) * (sign(ni + 1) * &qn - &size);
    let mut dual = vec![Rat::zero(); spec.n + 1];
    dual[0] = size.clone();
    if spec.n >= 1 {
        dual[1] = a1;
    }
    for k in 0..=(ni - 2).max(-1) {
        if k > di - 3 {
            continue;
        }
        let mut acc = Rat::zero();
        for j in 0..=(di - k - 3) {
            let delta = sign(ni - j - k) * &size / b.pow(ni * (ni - j - k))
                - sign(ni - j - k)
                    * design_ratio(ni - j - k)
                    * (&size + &(sign(ni) * &qn))
                    / b.pow(ni * (ni - j - k));
            acc += &(sign(ni - k)
                * b.pow(binom2(j) + ni * (ni - j - k))
                * qb(ni, k, b)
                * qb(ni - k, j, b)
                * (Rat::one() - delta));
        }
        dual[(ni - k) as usize] = acc;
    }

    Ok((
        DistVector::new(inner, DistKind::Inner),
        DistVector::new(dual, DistKind::Dual),
    ))
}

/// Inner and dual distribution of an extremal even-d code in the Hermitian
/// polar scheme (second ordering).
pub fn hermitian_polar_even_distributions(
    spec: &SchemeSpec,
    d: usize,
) -> Result<(DistVector, DistVector), CertError> {
    if spec.family != SchemeFamily::PolarA2nMinus1 {
        return Err(CertError::UnsupportedFamily(spec.family));
    }
    check_d(spec, d)?;
    if d % 2 != 0 {
        return Err(CertError::RequiresEvenD);
    }
    let b = spec.b();
    let q = spec.q_rat();
    let ni = spec.n as i64;
    let di = d as i64;
    let eps = epsilon_nd(spec.n, d, spec.q)?;
    let eps_inv = eps.recip();
    let x = spec.x_size();
    let size = hermitian_polar_even_lp_value(spec, d)?;
    let poch = |base: Rat, len: i64| q_pochhammer(&base, len as u64, b);

    let mut inner = vec![Rat::zero(); spec.n + 1];
    inner[0] = Rat::one();
    let size_ratio = &size / &x;
    for i in 0..ni {
        let mut acc = Rat::zero();
        for j in i..=(ni - di) {
            let head = poch(b.pow(ni + 1), ni - j) / poch(q.clone(), ni - j);
            let mid = (Rat::one() - &eps_inv)
                * b.pow(ni - j - di + 1)
                * (b.pow(ni + di - 1) - Rat::one())
                * (b.pow(j) - Rat::one())
                / ((b.pow(ni - di + 1) - Rat::one()) * (b.pow(2 * ni - j) - Rat::one()));
            let tail = poch(&q * &b.pow(di - 1), ni - j - di + 1)
                / poch(b.pow(ni + di), ni - j - di + 1)
                * &eps_inv;
            acc += &(sign(j - i)
                * b.pow(binom2(j - i))
                * qb(j, i, b)
                * qb(ni, j, b)
                * head
                * (Rat::one() - mid - tail));
        }
        inner[(ni - i) as usize] = &size_ratio * &acc;
    }

    let a1 = &x
        * &(b.pow(-di + 1)
            * poch(q.clone(), di - 1)
            / poch(b.pow(ni), di - 1)
            * (b.pow(ni) - Rat::one())
            / (b.pow(ni - di + 1) - Rat::one())
            * (Rat::one() - &eps));
    let mut dual = vec![Rat::zero(); spec.n + 1];
    dual[0] = size;
    if spec.n >= 1 {
        dual[1] = a1;
    }
    for k in 0..=(ni - 2).max(-1) {
        if k > di - 3 {
            continue;
        }
        let mu = spec.multiplicity((ni - k) as usize);
        let c_k = mu * b.pow(binom2(ni - k) - ni * (ni - k)) * poch(&q * &b.pow(k), ni - k)
            / poch(-b.pow(-ni), ni - k);
        let mut acc = Rat::zero();
        for j in 0..=(di - k - 3) {
            let head = poch(b.pow(-ni - 1 - k), ni - k - j) / poch(-b.pow(-ni), ni - k - j);
            let pq = poch(&q * &b.pow(k + j), di - k - j - 1);
            let delta = &eps * &(&pq / &poch(b.pow(ni + k + j + 1), di - k - j - 1))
                + (Rat::one() - &eps)
                    * b.pow(k + j - di + 1)
                    * (b.pow(ni - k - j) - Rat::one())
                    / (b.pow(ni - di + 1) - Rat::one())
                    * &pq
                    / poch(b.pow(ni + k + j), di - k - j - 1);
            acc += &(b.pow(binom2(j) - ni * j)
                * head
                * qb(ni - k, j, b)
                * (Rat::one() - delta));
        }
        dual[(ni - k) as usize] = c_k * acc;
    }

    Ok((
        DistVector::new(inner, DistKind::Inner),
        DistVector::new(dual, DistKind::Dual),
    ))
}

/// The matrix `C` with `C_{j,i} = [n-i, j]_b`.
pub fn c_matrix(n: usize, b: &Rat) -> Vec<Vec<Rat>> {
    let ni = n as i64;
    (0..=ni)
        .map(|j| (0..=ni).map(|i| qb(ni - i, j, b)).collect())
        .collect()
}

/// The inverse of `C`: `(C^{-1})_{i,j} = (-1)^{i+j-n} b^{C(i+j-n, 2)} [j, n-i]_b`.
pub fn c_inverse_matrix(n: usize, b: &Rat) -> Vec<Vec<Rat>> {
    let ni = n as i64;
    (0..=ni)
        .map(|i| {
            (0..=ni)
                .map(|j| {
                    let bin = qb(j, ni - i, b);
                    if bin.is_zero() {
                        Rat::zero()
                    } else {
                        sign(i + j - ni) * b.pow(binom2(i + j - ni)) * bin
                    }
                })
                .collect()
        })
        .collect()
}

/// The product `Q C^{-1}` in closed form, with `a = q^{-1} c^{-1} b^{-2n}`:
/// `(QC^{-1})_{k,j} = mu'_k a^k b^{k^2 + C(j,2)} (-bc)^j
///     (b^{-k})_j (a b^k)_j (q b^{n-k})_k / ((b^{-n})_j (q^{-1} b^{1-n})_j (c^{-1} b^{-n})_k)`.
pub fn qc_inverse_product(spec: &SchemeSpec) -> Result<Vec<Vec<Rat>>, CertError> {
    if !spec.family.is_ordinary() {
        return Err(CertError::UnsupportedFamily(spec.family));
    }
    let b = spec.b();
    let c = spec.c();
    let q = spec.q_rat();
    let ni = spec.n as i64;
    let a = q.recip() * c.recip() * b.pow(-2 * ni);
    let rows = (0..=ni)
        .map(|k| {
            let mu = spec.multiplicity(k as usize);
            let col_k = q_pochhammer(&(&q * &b.pow(ni - k)), k as u64, b)
                / q_pochhammer(&(c.recip() * b.pow(-ni)), k as u64, b);
            (0..=ni)
                .map(|j| {
                    &mu * &a.pow(k)
                        * b.pow(k * k + binom2(j))
                        * (-(b * c)).pow(j)
                        * q_pochhammer(&b.pow(-k), j as u64, b)
                        * q_pochhammer(&(&a * &b.pow(k)), j as u64, b)
                        * &col_k
                        / q_pochhammer(&b.pow(-ni), j as u64, b)
                        / q_pochhammer(&(q.recip() * b.pow(1 - ni)), j as u64, b)
                })
                .collect()
        })
        .collect();
    Ok(rows)
}

/// Piret's primal feasible solution for the Hamming scheme, valid for
/// `q >= max{d, n-d+2}`, with objective `q^{n-d+1}`.
pub fn piret_primal_hamming(n: usize, q: u32, d: usize) -> Result<DistVector, CertError> {
    if d < 1 || d > n {
        return Err(CertError::DOutOfRange { d, n });
    }
    let need = (d.max(n - d + 2)) as u32;
    if q < need {
        return Err(CertError::PiretConditionFails { q, need });
    }
    let qr = Rat::from_int(q as i64);
    let mut entries = vec![Rat::zero(); n + 1];
    entries[0] = Rat::one();
    for i in d..=n {
        let ii = i as i64;
        let di = d as i64;
        let mut acc = Rat::zero();
        for j in 0..=(ii - di) {
            acc += &(sign(j) * binom(ii, j) * (qr.pow(ii - di + 1 - j) - Rat::one()));
        }
        entries[i] = binom(n as i64, ii) * acc;
    }
    Ok(DistVector::new(entries, DistKind::PrimalSolution))
}

/// The closed-form LP optimum asserted for `(spec, d)`, used as the target
/// objective in [`verify_strong_duality`].
pub fn closed_form_lp_value(spec: &SchemeSpec, d: usize) -> Result<Rat, CertError> {
    match spec.family {
        f if f.is_affine() => {
            if spec.family == SchemeFamily::HermitianForms && d % 2 == 0 {
                Ok(hermitian_forms_even_lp_value(spec, d))
            } else {
                Ok(affine_lp_value(spec, d))
            }
        }
        f if f.is_ordinary() => {
            if spec.family == SchemeFamily::PolarA2nMinus1 && d % 2 == 0 {
                hermitian_polar_even_lp_value(spec, d)
            } else {
                Ok(ordinary_lp_value(spec, d))
            }
        }
        SchemeFamily::Hamming => {
            let need = (d.max(spec.n - d + 2)) as u32;
            if spec.q < need {
                return Err(CertError::PiretConditionFails { q: spec.q, need });
            }
            Ok(spec.q_rat().pow((spec.n - d + 1) as i64))
        }
        f => Err(CertError::UnsupportedFamily(f)),
    }
}

/// Assemble the matching primal (inner distribution) and dual
/// (Singleton-type) certificates for `(spec, d)`, check both feasibilities
/// exactly, and require the objectives to coincide.
#[allow(clippy::result_large_err)] // failures carry the offending rationals
pub fn verify_strong_duality(spec: &SchemeSpec, d: usize) -> Result<CertificatePair, VerifyFailure> {
    let build = || -> Result<(DistVector, DistVector), CertError> {
        match spec.family {
            f if f.is_affine() => {
                if spec.family == SchemeFamily::HermitianForms && d % 2 == 0 {
                    Ok((
                        hermitian_forms_even_distributions(spec, d)?.0,
                        dual_hermitian_forms_even(spec, d)?,
                    ))
                } else {
                    Ok((
                        inner_distribution_affine(spec, d)?.0,
                        dual_singleton_affine(spec, d)?,
                    ))
                }
            }
            f if f.is_ordinary() => {
                if spec.family == SchemeFamily::PolarA2nMinus1 && d % 2 == 0 {
                    Ok((
                        hermitian_polar_even_distributions(spec, d)?.0,
                        dual_hermitian_polar_even(spec, d)?,
                    ))
                } else {
                    Ok((
                        inner_distribution_ordinary(spec, d)?.0,
                        dual_singleton_ordinary(spec, d)?,
                    ))
                }
            }
            SchemeFamily::Hamming => {
                let primal = piret_primal_hamming(spec.n, spec.q, d)?;
                let poly = singleton_polynomial(&spec.z_points(), d);
                let dist = (d..=spec.n).collect();
                let bound = dual_bound_from_polynomial(spec, &poly, &dist)
                    .map_err(|_| CertError::DegenerateCertificate)?;
                let dual = DistVector::new(bound.coefficients, DistKind::DualSolution);
                Ok((primal, dual))
            }
            f => Err(CertError::UnsupportedFamily(f)),
        }
    };
    let (primal, dual) = build().map_err(|e| VerifyFailure::Construction(e.to_string()))?;

    for (i, a) in primal.entries.iter().enumerate() {
        if a.is_negative() {
            return Err(VerifyFailure::PrimalEntryNegative {
                index: i,
                value: a.clone(),
            });
        }
    }
    let transformed = dual_transform(spec, &primal);
    for (k, a) in transformed.entries.iter().enumerate() {
        if a.is_negative() {
            return Err(VerifyFailure::PrimalTransformNegative {
                index: k,
                value: a.clone(),
            });
        }
    }
    for (k, y) in dual.entries.iter().enumerate() {
        if y.is_negative() {
            return Err(VerifyFailure::DualEntryNegative {
                index: k,
                value: y.clone(),
            });
        }
    }
    for i in d..=spec.n {
        let v: Rat = (0..=spec.n)
            .map(|k| spec.q_number(k, i) * &dual.entries[k])
            .sum();
        if !(-&v).is_nonnegative() {
            return Err(VerifyFailure::DualConstraintViolated { index: i, value: v });
        }
    }

    let primal_objective = primal.total();
    let dual_objective: Rat = (0..=spec.n)
        .map(|k| spec.multiplicity(k) * &dual.entries[k])
        .sum();
    if primal_objective != dual_objective {
        return Err(VerifyFailure::ObjectiveGap {
            primal: primal_objective,
            dual: dual_objective,
        });
    }

    Ok(CertificatePair {
        scheme: spec.family.id().to_string(),
        family: spec.family,
        q: spec.q,
        n: spec.n,
        m: spec.m,
        d,
        duality_gap_zero: true,
        primal,
        dual,
        primal_objective,
        dual_objective,
    })
}
