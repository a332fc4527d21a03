//! Classical association scheme registry: parameters, valencies,
//! multiplicities, vertex counts, and P-/Q-numbers.
//!
//! Every instance is fully resolved at construction: the `(b, c)` pair, the
//! polar parameters `(p, e)` (with `e = ±1/2` kept as the doubled integer
//! `two_e` so all powers stay exact), and the vertex count. P-number tables
//! are memoized per instance on first use and immutable afterwards.
//!
//! Orderings: `PolarA2nMinus1` and `HalfD` default to the second eigenspace
//! ordering `E_0, E_n, E_1, E_{n-1}, ...` under which the q-Hahn forms of the
//! P- and Q-numbers apply verbatim; the standard ordering remains available
//! through [`SchemeSpec::p_number_standard`]. All other families use the
//! standard ordering.

use crate::exactq::{binom, binom2, q_binomial, Rat};
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeFamily {
    Hamming,
    Johnson,
    QJohnson,
    Bilinear,
    Alternating,
    HermitianForms,
    PolarA2nMinus1,
    PolarA2n,
    PolarB,
    PolarC,
    PolarD,
    PolarD2Elliptic,
    HalfD,
}

impl SchemeFamily {
    pub const ALL: [SchemeFamily; 13] = [
        SchemeFamily::Hamming,
        SchemeFamily::Johnson,
        SchemeFamily::QJohnson,
        SchemeFamily::Bilinear,
        SchemeFamily::Alternating,
        SchemeFamily::HermitianForms,
        SchemeFamily::PolarA2nMinus1,
        SchemeFamily::PolarA2n,
        SchemeFamily::PolarB,
        SchemeFamily::PolarC,
        SchemeFamily::PolarD,
        SchemeFamily::PolarD2Elliptic,
        SchemeFamily::HalfD,
    ];

    /// Stable identifier used in the CLI and in JSON output.
    pub fn id(self) -> &'static str {
        match self {
            SchemeFamily::Hamming => "hamming",
            SchemeFamily::Johnson => "johnson",
            SchemeFamily::QJohnson => "qjohnson",
            SchemeFamily::Bilinear => "bilinear",
            SchemeFamily::Alternating => "alternating",
            SchemeFamily::HermitianForms => "hermitian",
            SchemeFamily::PolarA2nMinus1 => "polar-2a-odd",
            SchemeFamily::PolarA2n => "polar-2a-even",
            SchemeFamily::PolarB => "polar-b",
            SchemeFamily::PolarC => "polar-c",
            SchemeFamily::PolarD => "polar-d",
            SchemeFamily::PolarD2Elliptic => "polar-2d",
            SchemeFamily::HalfD => "half-d",
        }
    }

    pub fn from_id(s: &str) -> Option<SchemeFamily> {
        SchemeFamily::ALL.iter().copied().find(|f| f.id() == s)
    }

    /// Matrix schemes over a finite field with `rk(x - y)` as the metric.
    pub fn is_affine(self) -> bool {
        matches!(
            self,
            SchemeFamily::Bilinear | SchemeFamily::Alternating | SchemeFamily::HermitianForms
        )
    }

    /// Subspace schemes covered by the unified q-Hahn `(b, c)` machinery.
    pub fn is_ordinary(self) -> bool {
        matches!(
            self,
            SchemeFamily::QJohnson | SchemeFamily::PolarA2nMinus1 | SchemeFamily::HalfD
        )
    }

    pub fn is_polar(self) -> bool {
        matches!(
            self,
            SchemeFamily::PolarA2nMinus1
                | SchemeFamily::PolarA2n
                | SchemeFamily::PolarB
                | SchemeFamily::PolarC
                | SchemeFamily::PolarD
                | SchemeFamily::PolarD2Elliptic
        )
    }

    /// Families carrying a second size parameter `m`.
    pub fn needs_m(self) -> bool {
        matches!(
            self,
            SchemeFamily::Johnson
                | SchemeFamily::QJohnson
                | SchemeFamily::Bilinear
                | SchemeFamily::Alternating
                | SchemeFamily::HalfD
        )
    }

    /// Doubled polar-space parameter `2e` from the classification table.
    fn polar_two_e(self) -> Option<i64> {
        match self {
            SchemeFamily::PolarA2nMinus1 => Some(-1),
            SchemeFamily::PolarA2n => Some(1),
            SchemeFamily::PolarB | SchemeFamily::PolarC => Some(0),
            SchemeFamily::PolarD => Some(-2),
            SchemeFamily::PolarD2Elliptic => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for SchemeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("{family}: missing parameter {name}")]
    MissingParameter {
        family: SchemeFamily,
        name: &'static str,
    },
    #[error("{family}: invalid parameters: {reason}")]
    InvalidParameter { family: SchemeFamily, reason: String },
    #[error("{family}: unsupported operation: {reason}")]
    Unsupported { family: SchemeFamily, reason: String },
}

/// Polar-space data: `p` is the field size of the form (`q^2` for the
/// Hermitian types, `q` otherwise) and `two_e = 2e`. When `two_e` is odd,
/// `p` is a perfect square and `sqrt_p` carries its root so that
/// `p^{i+e} = sqrt_p^{2i+two_e}` is an exact integer power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarParams {
    pub p: Rat,
    pub two_e: i64,
    pub sqrt_p: Option<Rat>,
}

impl PolarParams {
    /// `p^{h/2}` for an integer number of half-steps `h`.
    pub fn half_pow(&self, h: i64) -> Rat {
        if h % 2 == 0 {
            self.p.pow(h / 2)
        } else {
            self.sqrt_p
                .as_ref()
                .expect("odd half-exponent without sqrt_p")
                .pow(h)
        }
    }

    /// `(-p^{a/2}; p)_len = prod_{l=0}^{len-1} (1 + p^{a/2 + l})`.
    pub fn poch_minus(&self, a_halves: i64, len: usize) -> Rat {
        let mut acc = Rat::one();
        for l in 0..len as i64 {
            acc *= &(Rat::one() + self.half_pow(a_halves + 2 * l));
        }
        acc
    }
}

mod bigint_as_string {
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        BigInt::from_str(&s).map_err(de::Error::custom)
    }
}

struct Tables {
    valencies: Vec<Rat>,
    multiplicities: Vec<Rat>,
    /// `p_numbers[i][k] = P_i(k)` in the instance's default ordering.
    p_numbers: Vec<Vec<Rat>>,
}

/// A fully-resolved association scheme instance with `n` classes.
#[derive(Serialize, Deserialize)]
pub struct SchemeSpec {
    pub family: SchemeFamily,
    pub q: u32,
    /// Number of classes (= rank for polar spaces, `floor(m/2)` for
    /// `Alternating`/`HalfD`).
    pub n: usize,
    pub m: Option<u32>,
    /// `(b, c)` of the unified parametrization, where defined.
    pub bc: Option<(Rat, Rat)>,
    #[serde(with = "bigint_as_string")]
    pub num_vertices: BigInt,
    pub polar: Option<PolarParams>,
    #[serde(skip)]
    tables: OnceLock<Tables>,
    #[serde(skip)]
    standard_tables: OnceLock<Tables>,
}

impl Clone for SchemeSpec {
    fn clone(&self) -> Self {
        SchemeSpec {
            family: self.family,
            q: self.q,
            n: self.n,
            m: self.m,
            bc: self.bc.clone(),
            num_vertices: self.num_vertices.clone(),
            polar: self.polar.clone(),
            tables: OnceLock::new(),
            standard_tables: OnceLock::new(),
        }
    }
}

impl fmt::Debug for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(q={}, n={}", self.family, self.q, self.n)?;
        if let Some(m) = self.m {
            write!(f, ", m={m}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Build a scheme instance. `n` may be omitted for `Alternating` and `HalfD`
/// (it is `floor(m/2)` there); `m` is required exactly for the families that
/// carry a second size parameter.
pub fn make_scheme(
    family: SchemeFamily,
    q: u32,
    n: Option<usize>,
    m: Option<u32>,
) -> Result<SchemeSpec, SchemeError> {
    let invalid = |reason: String| SchemeError::InvalidParameter { family, reason };
    if q < 2 {
        return Err(invalid(format!("q must be at least 2, got {q}")));
    }
    if family.needs_m() && m.is_none() {
        return Err(SchemeError::MissingParameter { family, name: "m" });
    }
    if !family.needs_m() && m.is_some() {
        return Err(invalid("m is not a parameter of this family".into()));
    }

    let n = match family {
        SchemeFamily::Alternating | SchemeFamily::HalfD => {
            let m = m.unwrap() as usize;
            if m < 2 {
                return Err(invalid(format!("m must be at least 2, got {m}")));
            }
            let derived = m / 2;
            if let Some(n) = n {
                if n != derived {
                    return Err(invalid(format!(
                        "n = {n} inconsistent with floor(m/2) = {derived}"
                    )));
                }
            }
            derived
        }
        _ => n.ok_or(SchemeError::MissingParameter { family, name: "n" })?,
    };
    if n < 1 {
        return Err(invalid("n must be at least 1".into()));
    }
    if let Some(m) = m {
        if matches!(
            family,
            SchemeFamily::Johnson | SchemeFamily::QJohnson | SchemeFamily::Bilinear
        ) && (m as usize) < n
        {
            return Err(invalid(format!("m = {m} must be at least n = {n}")));
        }
    }

    let qr = Rat::from_int(q as i64);
    let ni = n as i64;

    let bc = match family {
        SchemeFamily::Bilinear | SchemeFamily::QJohnson => {
            Some((qr.clone(), qr.pow(m.unwrap() as i64 - ni)))
        }
        SchemeFamily::HermitianForms | SchemeFamily::PolarA2nMinus1 => {
            Some((-&qr, -Rat::one()))
        }
        SchemeFamily::Alternating | SchemeFamily::HalfD => {
            let c = if m.unwrap() % 2 == 0 {
                qr.recip()
            } else {
                qr.clone()
            };
            Some((qr.pow(2), c))
        }
        _ => None,
    };

    let polar = family.polar_two_e().map(|two_e| {
        if two_e % 2 == 0 {
            PolarParams {
                p: qr.clone(),
                two_e,
                sqrt_p: None,
            }
        } else {
            PolarParams {
                p: qr.pow(2),
                two_e,
                sqrt_p: Some(qr.clone()),
            }
        }
    });

    let num_vertices = vertex_count(family, q, n, m, &polar);

    // Matrix schemes satisfy |X| = (c b^n)^n exactly.
    if family.is_affine() {
        let (b, c) = bc.as_ref().unwrap();
        let closed = (c * &b.pow(ni)).pow(ni);
        debug_assert_eq!(closed, Rat::from_bigint(num_vertices.clone()));
    }

    let spec = SchemeSpec {
        family,
        q,
        n,
        m,
        bc,
        num_vertices,
        polar,
        tables: OnceLock::new(),
        standard_tables: OnceLock::new(),
    };

    if family == SchemeFamily::HalfD {
        // The multiplicities of the halved scheme are recovered from the
        // column orthogonality of its P-numbers; reject the instance rather
        // than proceed if they fail to partition |X|.
        let total: Rat = (0..=spec.n).map(|k| spec.multiplicity(k)).sum();
        if total != spec.x_size() {
            return Err(SchemeError::InvalidParameter {
                family,
                reason: format!(
                    "derived multiplicities sum to {total}, expected |X| = {}",
                    spec.x_size()
                ),
            });
        }
    }

    Ok(spec)
}

fn vertex_count(
    family: SchemeFamily,
    q: u32,
    n: usize,
    m: Option<u32>,
    polar: &Option<PolarParams>,
) -> BigInt {
    let qb = BigInt::from(q);
    let ni = n as i64;
    match family {
        SchemeFamily::Hamming => qb.pow(n as u32),
        SchemeFamily::Johnson => {
            let m = m.unwrap() as i64;
            rat_to_int(binom(m + ni, ni))
        }
        SchemeFamily::QJohnson => {
            let m = m.unwrap() as i64;
            rat_to_int(q_binomial(m + ni, ni, &Rat::from_int(q as i64)).unwrap())
        }
        SchemeFamily::Bilinear => qb.pow(m.unwrap() * n as u32),
        SchemeFamily::Alternating => {
            let m = m.unwrap();
            qb.pow(m * (m - 1) / 2)
        }
        SchemeFamily::HermitianForms => qb.pow((n * n) as u32),
        SchemeFamily::HalfD => {
            let m = m.unwrap();
            let mut acc = BigInt::one();
            for i in 1..m {
                acc *= BigInt::one() + qb.pow(i);
            }
            acc
        }
        _ => {
            let polar = polar.as_ref().unwrap();
            let mut acc = Rat::one();
            for i in 1..=ni {
                acc *= &(Rat::one() + polar.half_pow(2 * i + polar.two_e));
            }
            rat_to_int(acc)
        }
    }
}

fn rat_to_int(r: Rat) -> BigInt {
    assert!(r.is_integer(), "expected an integer, got {r}");
    r.numer().clone()
}

/// Unwrap for bases validated at scheme construction (never 0 or ±1).
fn qb(n: i64, k: i64, base: &Rat) -> Rat {
    q_binomial(n, k, base).expect("scheme base cannot be degenerate")
}

/// The permutation realizing the second eigenspace ordering
/// `E_0, E_n, E_1, E_{n-1}, E_2, ...`: position `2j` holds `j` and position
/// `2j+1` holds `n - j`.
pub fn second_ordering_permutation(n: usize) -> Vec<usize> {
    (0..=n)
        .map(|k| if k % 2 == 0 { k / 2 } else { n - (k - 1) / 2 })
        .collect()
}

impl SchemeSpec {
    pub fn x_size(&self) -> Rat {
        Rat::from_bigint(self.num_vertices.clone())
    }

    pub fn b(&self) -> &Rat {
        &self.bc.as_ref().expect("family has no (b, c)").0
    }

    pub fn c(&self) -> &Rat {
        &self.bc.as_ref().expect("family has no (b, c)").1
    }

    /// `c b^n`, the recurring size parameter of the matrix schemes.
    pub fn cbn(&self) -> Rat {
        self.c() * &self.b().pow(self.n as i64)
    }

    pub fn q_rat(&self) -> Rat {
        Rat::from_int(self.q as i64)
    }

    pub fn valency(&self, i: usize) -> Rat {
        assert!(i <= self.n, "class index {i} out of range 0..={}", self.n);
        self.tables().valencies[i].clone()
    }

    pub fn multiplicity(&self, k: usize) -> Rat {
        assert!(k <= self.n, "eigenspace index {k} out of range 0..={}", self.n);
        self.tables().multiplicities[k].clone()
    }

    /// `P_i(k)` in the instance's default ordering.
    pub fn p_number(&self, i: usize, k: usize) -> Rat {
        assert!(i <= self.n && k <= self.n, "index out of range");
        self.tables().p_numbers[i][k].clone()
    }

    /// `Q_k(i) = mu_k P_i(k) / v_i`.
    pub fn q_number(&self, k: usize, i: usize) -> Rat {
        let t = self.tables();
        &t.multiplicities[k] * &t.p_numbers[i][k] / &t.valencies[i]
    }

    /// Standard-ordering `P_i(k)` for polar families (for `PolarA2nMinus1`
    /// this bypasses the default second ordering).
    pub fn p_number_standard(&self, i: usize, k: usize) -> Rat {
        assert!(self.family.is_polar(), "standard ordering is a polar notion");
        assert!(i <= self.n && k <= self.n, "index out of range");
        self.std_tables().p_numbers[i][k].clone()
    }

    pub fn multiplicity_standard(&self, k: usize) -> Rat {
        assert!(self.family.is_polar(), "standard ordering is a polar notion");
        self.std_tables().multiplicities[k].clone()
    }

    /// The Q-polynomial evaluation points `z_0, ..., z_n` of the default
    /// ordering (`Q_k(i) = g_k(z_i)` with `deg g_k = k`).
    pub fn z_points(&self) -> Vec<Rat> {
        match self.family {
            SchemeFamily::Hamming => (0..=self.n as i64).map(Rat::from_int).collect(),
            SchemeFamily::Johnson => {
                let v = (self.m.unwrap() as i64) + self.n as i64;
                (0..=self.n as i64)
                    .map(|i| Rat::from_int(i * (v + 1 - i)))
                    .collect()
            }
            _ if self.bc.is_some() => {
                let b = self.b();
                (0..=self.n as i64).map(|i| b.pow(-i)).collect()
            }
            _ => {
                let p = &self.polar.as_ref().unwrap().p;
                (0..=self.n as i64).map(|i| p.pow(-i)).collect()
            }
        }
    }

    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| self.build_tables(false))
    }

    fn std_tables(&self) -> &Tables {
        if self.family == SchemeFamily::PolarA2nMinus1 {
            self.standard_tables.get_or_init(|| self.build_tables(true))
        } else {
            self.tables()
        }
    }

    fn build_tables(&self, standard: bool) -> Tables {
        let n = self.n;
        match self.family {
            SchemeFamily::Hamming => {
                let q = self.q as i64;
                let valencies: Vec<Rat> = (0..=n as i64)
                    .map(|i| binom(n as i64, i) * Rat::from_int(q - 1).pow(i))
                    .collect();
                let p_numbers = table(n, |i, k| krawtchouk(n as i64, q, i as i64, k as i64));
                Tables {
                    multiplicities: valencies.clone(),
                    valencies,
                    p_numbers,
                }
            }
            SchemeFamily::Johnson => {
                let m = self.m.unwrap() as i64;
                let ni = n as i64;
                let valencies: Vec<Rat> = (0..=ni).map(|i| binom(ni, i) * binom(m, i)).collect();
                let multiplicities: Vec<Rat> = (0..=ni)
                    .map(|k| binom(m + ni, k) - binom(m + ni, k - 1))
                    .collect();
                let p_numbers = table(n, |i, k| eberlein(ni, m, i as i64, k as i64));
                Tables {
                    valencies,
                    multiplicities,
                    p_numbers,
                }
            }
            f if f.is_affine() => {
                let valencies: Vec<Rat> = (0..=n).map(|i| self.affine_valency(i)).collect();
                let p_numbers = table(n, |i, k| self.affine_p_number(i as i64, k as i64));
                Tables {
                    multiplicities: valencies.clone(),
                    valencies,
                    p_numbers,
                }
            }
            SchemeFamily::QJohnson => {
                let q = self.q_rat();
                let m = self.m.unwrap() as i64;
                let ni = n as i64;
                let valencies: Vec<Rat> = (0..=ni)
                    .map(|i| q.pow(i * i) * qb(ni, i, &q) * qb(m, i, &q))
                    .collect();
                let multiplicities: Vec<Rat> = (0..=ni)
                    .map(|k| qb(m + ni, k, &q) - qb(m + ni, k - 1, &q))
                    .collect();
                let p_numbers =
                    table(n, |i, k| &valencies[i] * &self.hahn_kernel(i as i64, k as i64));
                Tables {
                    valencies,
                    multiplicities,
                    p_numbers,
                }
            }
            SchemeFamily::PolarA2nMinus1 if !standard => {
                // Second ordering: valencies are unchanged, multiplicities
                // are permuted, P-numbers come from the q-Hahn kernel.
                let std = self.std_tables();
                let perm = second_ordering_permutation(n);
                let multiplicities: Vec<Rat> = perm
                    .iter()
                    .map(|&k| std.multiplicities[k].clone())
                    .collect();
                let valencies = std.valencies.clone();
                let p_numbers =
                    table(n, |i, k| &valencies[i] * &self.hahn_kernel(i as i64, k as i64));
                Tables {
                    valencies,
                    multiplicities,
                    p_numbers,
                }
            }
            SchemeFamily::HalfD => {
                let q = self.q_rat();
                let m = self.m.unwrap() as i64;
                let valencies: Vec<Rat> = (0..=n as i64)
                    .map(|i| q.pow(binom2(2 * i)) * qb(m, 2 * i, &q))
                    .collect();
                let p_numbers =
                    table(n, |i, k| &valencies[i] * &self.hahn_kernel(i as i64, k as i64));
                // Column orthogonality pins the multiplicities:
                // mu_k = |X| / sum_i P_i(k)^2 / v_i.
                let x = self.x_size();
                let multiplicities: Vec<Rat> = (0..=n)
                    .map(|k| {
                        let s: Rat = (0..=n)
                            .map(|i| &p_numbers[i][k] * &p_numbers[i][k] / &valencies[i])
                            .sum();
                        &x / &s
                    })
                    .collect();
                Tables {
                    valencies,
                    multiplicities,
                    p_numbers,
                }
            }
            _ => {
                // Polar spaces in the standard ordering.
                let polar = self.polar.as_ref().unwrap();
                let ni = n as i64;
                let valencies: Vec<Rat> = (0..=ni)
                    .map(|i| {
                        polar.half_pow(i * (i + 1) + i * polar.two_e) * qb(ni, i, &polar.p)
                    })
                    .collect();
                let multiplicities: Vec<Rat> = (0..=ni)
                    .map(|k| {
                        let num = polar.poch_minus(polar.two_e + 2, n);
                        let den1 = polar.poch_minus(polar.two_e - 2 * k + 2, n - k as usize);
                        let den2 = polar.poch_minus(2 * k - 2 * ni - polar.two_e - 2, k as usize);
                        polar.p.pow(k * (k - ni)) * qb(ni, k, &polar.p) * num / (den1 * den2)
                    })
                    .collect();
                let p_numbers = table(n, |i, k| {
                    &valencies[i] * &self.polar_kernel(i as i64, k as i64)
                });
                Tables {
                    valencies,
                    multiplicities,
                    p_numbers,
                }
            }
        }
    }

    fn affine_valency(&self, i: usize) -> Rat {
        let b = self.b();
        let ni = self.n as i64;
        let mut prod = Rat::one();
        for j in 0..i as i64 {
            prod *= &(self.c() * &b.pow(ni - j) - Rat::one());
        }
        b.pow(binom2(i as i64)) * qb(ni, i as i64, b) * prod
    }

    /// Affine q-Krawtchouk value
    /// `P_i(k) = sum_j (-1)^{i-j} b^{C(i-j,2)} [n-j, n-i][n-k, j] (c b^n)^j`.
    fn affine_p_number(&self, i: i64, k: i64) -> Rat {
        let b = self.b();
        let ni = self.n as i64;
        let cbn = self.cbn();
        let mut acc = Rat::zero();
        for j in 0..=i {
            let sign = Rat::from_int(if (i - j) % 2 == 0 { 1 } else { -1 });
            acc += &(sign
                * b.pow(binom2(i - j))
                * qb(ni - j, ni - i, b)
                * qb(ni - k, j, b)
                * cbn.pow(j));
        }
        acc
    }

    /// Terminating q-Hahn kernel `phi(i, k)` with
    /// `P_i(k) = v_i phi(i,k)` and `Q_k(i) = mu_k phi(i,k)`:
    /// the 3-phi-2 sum with numerator parameters `b^{-i}, b^{-k}, a b^k`
    /// (where `a = q^{-1} c^{-1} b^{-2n}`) and denominator parameters
    /// `b^{-n}, c^{-1} b^{-n}`, truncated at `min(i,k)` where it vanishes.
    fn hahn_kernel(&self, i: i64, k: i64) -> Rat {
        let b = self.b();
        let c = self.c();
        let ni = self.n as i64;
        let a = self.q_rat().recip() * c.recip() * b.pow(-2 * ni);
        let bi = b.pow(-i);
        let bk = b.pow(-k);
        let abk = &a * &b.pow(k);
        let bn = b.pow(-ni);
        let cbn = c.recip() * b.pow(-ni);

        let mut acc = Rat::one();
        // Running Pochhammer factors, extended one step per term.
        let mut term = Rat::one();
        for l in 0..=i.min(k) {
            if l > 0 {
                let bl = b.pow(l - 1);
                let num = (Rat::one() - &bi * &bl)
                    * (Rat::one() - &bk * &bl)
                    * (Rat::one() - &abk * &bl);
                let den = (Rat::one() - &bn * &bl)
                    * (Rat::one() - &cbn * &bl)
                    * (Rat::one() - b.pow(l));
                term = term * num * b / den;
                acc += &term;
            }
        }
        acc
    }

    /// Standard polar kernel: `P_i(k)/v_i = [n,k]^{-1} sum_l (-1)^l
    /// [n-i, k-l][i, l] p^{l(l-i-e-1)}`.
    fn polar_kernel(&self, i: i64, k: i64) -> Rat {
        let polar = self.polar.as_ref().unwrap();
        let ni = self.n as i64;
        let mut acc = Rat::zero();
        for l in 0..=i {
            let term = qb(ni - i, k - l, &polar.p) * qb(i, l, &polar.p);
            if term.is_zero() {
                continue;
            }
            let sign = Rat::from_int(if l % 2 == 0 { 1 } else { -1 });
            acc += &(sign * term * polar.half_pow(2 * l * (l - i - 1) - l * polar.two_e));
        }
        acc / qb(ni, k, &polar.p)
    }
}

fn table<F: FnMut(usize, usize) -> Rat>(n: usize, mut f: F) -> Vec<Vec<Rat>> {
    (0..=n)
        .map(|i| (0..=n).map(|k| f(i, k)).collect())
        .collect()
}

/// Krawtchouk value `K_i(k) = sum_j (-1)^j (q-1)^{i-j} C(k,j) C(n-k, i-j)`.
fn krawtchouk(n: i64, q: i64, i: i64, k: i64) -> Rat {
    let mut acc = Rat::zero();
    for j in 0..=i {
        let sign = Rat::from_int(if j % 2 == 0 { 1 } else { -1 });
        acc += &(sign * Rat::from_int(q - 1).pow(i - j) * binom(k, j) * binom(n - k, i - j));
    }
    acc
}

/// Eberlein value, the `q -> 1` limit of the dual q-Hahn sum:
/// `P_i(k) = sum_j (-1)^{i-j} C(n-j, i-j) C(n-k, j) C(m+j-k, j)`.
fn eberlein(n: i64, m: i64, i: i64, k: i64) -> Rat {
    let mut acc = Rat::zero();
    for j in 0..=i {
        let sign = Rat::from_int(if (i - j) % 2 == 0 { 1 } else { -1 });
        acc += &(sign * binom(n - j, i - j) * binom(n - k, j) * binom(m + j - k, j));
    }
    acc
}
