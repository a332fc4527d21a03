//! Table-based small finite fields for the brute-force oracle.
//!
//! Supports prime fields and quadratic extension towers: `F_{p^2}` is
//! realized as `F_p[x]/(f)` with `f` the first irreducible monic quadratic in
//! coefficient order, so field construction is deterministic. Conjugation on
//! a quadratic extension is the `x -> x^s` power map, `s` the suborder.

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("unsupported field order {0}: need a prime or the square of a supported order")]
    UnsupportedOrder(u32),
}

#[derive(Clone)]
pub struct Field {
    pub order: usize,
    /// Suborder s with order = s^2 for quadratic extensions; 0 for prime fields.
    pub suborder: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    conj: Vec<u16>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(q: u32) -> Result<Field, FieldError> {
        if is_prime(q) {
            return Ok(Field::prime(q as usize));
        }
        let s = (q as f64).sqrt().round() as u32;
        if s >= 2 && s * s == q {
            let base = Field::new(s)?;
            return Ok(Field::quadratic_extension(&base));
        }
        Err(FieldError::UnsupportedOrder(q))
    }

    fn prime(p: usize) -> Field {
        let idx = |a: usize, b: usize| a * p + b;
        let mut add = vec![0u16; p * p];
        let mut mul = vec![0u16; p * p];
        let mut neg = vec![0u16; p];
        let mut inv = vec![0u16; p];
        for a in 0..p {
            neg[a] = ((p - a) % p) as u16;
            for b in 0..p {
                add[idx(a, b)] = ((a + b) % p) as u16;
                mul[idx(a, b)] = ((a * b) % p) as u16;
            }
        }
        for a in 1..p {
            inv[a] = (1..p).find(|&b| (a * b) % p == 1).unwrap() as u16;
        }
        Field {
            order: p,
            suborder: 0,
            add,
            mul,
            neg,
            inv,
            conj: (0..p as u16).collect(),
        }
    }

    fn quadratic_extension(base: &Field) -> Field {
        let s = base.order;
        // First monic quadratic x^2 + c1 x + c0 without a root, scanning
        // (c1, c0) in index order.
        let (c1, c0) = (0..s)
            .flat_map(|c1| (0..s).map(move |c0| (c1, c0)))
            .find(|&(c1, c0)| {
                (0..s).all(|x| {
                    let x2 = base.mul(x as u16, x as u16);
                    let t = base.add(x2, base.mul(c1 as u16, x as u16));
                    base.add(t, c0 as u16) != 0
                })
            })
            .expect("an irreducible quadratic always exists");

        let q = s * s;
        let enc = |lo: u16, hi: u16| (lo as usize + hi as usize * s) as u16;
        let dec = |e: u16| ((e as usize % s) as u16, (e as usize / s) as u16);
        // x^2 = -c1 x - c0.
        let x2_lo = base.neg(c0 as u16);
        let x2_hi = base.neg(c1 as u16);

        let idx = |a: usize, b: usize| a * q + b;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q {
            let (alo, ahi) = dec(a as u16);
            neg[a] = enc(base.neg(alo), base.neg(ahi));
            for b in 0..q {
                let (blo, bhi) = dec(b as u16);
                add[idx(a, b)] = enc(base.add(alo, blo), base.add(ahi, bhi));
                // (alo + ahi x)(blo + bhi x)
                let lo = base.mul(alo, blo);
                let mid = base.add(base.mul(alo, bhi), base.mul(ahi, blo));
                let hi = base.mul(ahi, bhi);
                mul[idx(a, b)] = enc(
                    base.add(lo, base.mul(hi, x2_lo)),
                    base.add(mid, base.mul(hi, x2_hi)),
                );
            }
        }
        for a in 1..q {
            inv[a] = (1..q)
                .find(|&b| mul[idx(a, b)] == 1)
                .expect("field element has an inverse") as u16;
        }
        let mut field = Field {
            order: q,
            suborder: s,
            add,
            mul,
            neg,
            inv,
            conj: Vec::new(),
        };
        field.conj = (0..q as u16).map(|a| field.pow(a, s as u64)).collect();
        field
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        let mut acc = 1u16;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Conjugation `x -> x^s` on a quadratic extension (identity on primes).
    #[inline]
    pub fn conj(&self, a: u16) -> u16 {
        self.conj[a as usize]
    }

    /// Elements fixed by conjugation (the base subfield of an extension).
    pub fn fixed_subfield(&self) -> Vec<u16> {
        (0..self.order as u16)
            .filter(|&a| self.conj(a) == a)
            .collect()
    }
}

/// Rank of a dense matrix over the field by Gaussian elimination.
pub fn rank(field: &Field, data: &[u16], rows: usize, cols: usize) -> usize {
    debug_assert_eq!(data.len(), rows * cols);
    let mut m = data.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| m[r * cols + col] != 0);
        let Some(p) = pivot else { continue };
        for c in 0..cols {
            m.swap(p * cols + c, rank * cols + c);
        }
        let inv = field.inv(m[rank * cols + col]);
        for c in col..cols {
            m[rank * cols + c] = field.mul(m[rank * cols + c], inv);
        }
        for r in 0..rows {
            if r != rank && m[r * cols + col] != 0 {
                let f = m[r * cols + col];
                for c in col..cols {
                    let s = field.mul(f, m[rank * cols + c]);
                    m[r * cols + c] = field.sub(m[r * cols + c], s);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
