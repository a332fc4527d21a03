//! Independent ground truth at tiny scale: explicit matrix-scheme instances,
//! brute-force distance distributions, idempotent verification, and exact
//! maximum d-code search.
//!
//! Nothing here reads the algebraic tables to *construct* data; vertices and
//! distances come from explicit finite-field matrices, so agreement with the
//! `schemes` module is a genuine cross-check. Polar-space vertex construction
//! is out of scope; polar schemes are validated through their identities and
//! LP cross-checks only.

use crate::certificates::{DistKind, DistVector};
use crate::exactq::Rat;
use crate::gf::{rank, Field, FieldError};
use crate::schemes::{make_scheme, SchemeFamily, SchemeSpec};
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::{Duration, Instant};

pub const DEFAULT_VERTEX_CAP: usize = 4096;
pub const EIGEN_VERTEX_CAP: usize = 256;
pub const DEFAULT_SUBSET_SEED: u64 = 0x5eed_de15_a27e_0001;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("vertex cap exceeded: instance has {size} vertices, cap is {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("clique search exceeded the time budget of {0:?}")]
    TimeBudgetExceeded(Duration),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("family {0} has no matrix-model oracle")]
    UnsupportedFamily(SchemeFamily),
}

/// An explicit matrix scheme: every vertex is a matrix over a small field
/// and the distance is the rank of the difference (halved for alternating
/// matrices, whose rank is always even).
pub struct MatrixSchemeInstance {
    pub spec: SchemeSpec,
    pub field: Field,
    pub mat_rows: usize,
    pub mat_cols: usize,
    /// Flattened row-major matrices, in deterministic enumeration order.
    pub vertices: Vec<Vec<u16>>,
}

impl MatrixSchemeInstance {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Distance class index of a vertex pair.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let va = &self.vertices[a];
        let vb = &self.vertices[b];
        let diff: Vec<u16> = va
            .iter()
            .zip(vb.iter())
            .map(|(&x, &y)| self.field.sub(x, y))
            .collect();
        let r = rank(&self.field, &diff, self.mat_rows, self.mat_cols);
        match self.spec.family {
            SchemeFamily::Alternating => {
                debug_assert!(r % 2 == 0, "alternating matrices have even rank");
                r / 2
            }
            _ => r,
        }
    }

    /// Full distance matrix (for instances small enough to afford it).
    pub fn distance_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.num_vertices();
        (0..n)
            .into_par_iter()
            .map(|a| (0..n).map(|b| self.distance(a, b) as u8).collect())
            .collect()
    }
}

/// Build the explicit instance for a matrix-scheme family, refusing to
/// enumerate more than `cap` vertices.
pub fn build_instance(
    family: SchemeFamily,
    q: u32,
    n: Option<usize>,
    m: Option<u32>,
    cap: usize,
) -> Result<MatrixSchemeInstance, OracleError> {
    if !family.is_affine() {
        return Err(OracleError::UnsupportedFamily(family));
    }
    let spec = make_scheme(family, q, n, m).expect("valid oracle parameters");
    let size = spec
        .num_vertices
        .to_usize()
        .ok_or(OracleError::CapExceeded {
            size: usize::MAX,
            cap,
        })?;
    if size > cap {
        return Err(OracleError::CapExceeded { size, cap });
    }

    match family {
        SchemeFamily::Bilinear => {
            let field = Field::new(q)?;
            let rows = m.unwrap() as usize;
            let cols = spec.n;
            let vertices = enumerate_free(&field, rows * cols);
            Ok(MatrixSchemeInstance {
                spec,
                field,
                mat_rows: rows,
                mat_cols: cols,
                vertices,
            })
        }
        SchemeFamily::Alternating => {
            let field = Field::new(q)?;
            let mm = m.unwrap() as usize;
            let upper: Vec<(usize, usize)> = (0..mm)
                .flat_map(|i| ((i + 1)..mm).map(move |j| (i, j)))
                .collect();
            let vertices = enumerate_free(&field, upper.len())
                .into_iter()
                .map(|free| {
                    let mut mat = vec![0u16; mm * mm];
                    for (slot, &(i, j)) in upper.iter().enumerate() {
                        mat[i * mm + j] = free[slot];
                        mat[j * mm + i] = field.neg(free[slot]);
                    }
                    mat
                })
                .collect();
            Ok(MatrixSchemeInstance {
                spec,
                field,
                mat_rows: mm,
                mat_cols: mm,
                vertices,
            })
        }
        SchemeFamily::HermitianForms => {
            // Entries live in F_{q^2}; diagonal entries are conjugation-fixed.
            let field = Field::new(q * q)?;
            let nn = spec.n;
            let fixed = field.fixed_subfield();
            debug_assert_eq!(fixed.len(), q as usize);
            let upper: Vec<(usize, usize)> = (0..nn)
                .flat_map(|i| ((i + 1)..nn).map(move |j| (i, j)))
                .collect();
            let mut vertices = Vec::with_capacity(size);
            let diag_choices = pow_usize(q as usize, nn);
            let free_choices = pow_usize(field.order, upper.len());
            for dsel in 0..diag_choices {
                let mut diag = Vec::with_capacity(nn);
                let mut rem = dsel;
                for _ in 0..nn {
                    diag.push(fixed[rem % q as usize]);
                    rem /= q as usize;
                }
                for fsel in 0..free_choices {
                    let mut mat = vec![0u16; nn * nn];
                    for (i, &dv) in diag.iter().enumerate() {
                        mat[i * nn + i] = dv;
                    }
                    let mut rem = fsel;
                    for &(i, j) in &upper {
                        let v = (rem % field.order) as u16;
                        rem /= field.order;
                        mat[i * nn + j] = v;
                        mat[j * nn + i] = field.conj(v);
                    }
                    vertices.push(mat);
                }
            }
            Ok(MatrixSchemeInstance {
                spec,
                field,
                mat_rows: nn,
                mat_cols: nn,
                vertices,
            })
        }
        _ => unreachable!(),
    }
}

fn pow_usize(base: usize, exp: usize) -> usize {
    base.pow(exp as u32)
}

fn enumerate_free(field: &Field, slots: usize) -> Vec<Vec<u16>> {
    let total = pow_usize(field.order, slots);
    (0..total)
        .map(|mut sel| {
            (0..slots)
                .map(|_| {
                    let v = (sel % field.order) as u16;
                    sel /= field.order;
                    v
                })
                .collect()
        })
        .collect()
}

/// Counts of vertices at each distance from a base point, verified to be
/// independent of the base point over three samples.
pub fn empirical_valencies(inst: &MatrixSchemeInstance) -> Vec<Rat> {
    let n = inst.num_vertices();
    let classes = inst.spec.n + 1;
    let count_from = |base: usize| -> Vec<usize> {
        let mut counts = vec![0usize; classes];
        for v in 0..n {
            counts[inst.distance(base, v)] += 1;
        }
        counts
    };
    let reference = count_from(0);
    for base in [n / 3, 2 * n / 3] {
        debug_assert_eq!(count_from(base), reference, "not vertex transitive?");
    }
    reference
        .into_iter()
        .map(|c| Rat::from_int(c as i64))
        .collect()
}

/// Verify `D_i E_k = P_i(k) E_k` exactly for every `k`, where
/// `E_k = (1/|X|) sum_j Q_k(j) D_j`, and return the eigenvalue column
/// `{P_i(k)}` of the distance-i graph.
pub fn empirical_eigenvalues(
    inst: &MatrixSchemeInstance,
    i: usize,
) -> Result<Vec<Rat>, OracleError> {
    let size = inst.num_vertices();
    if size > EIGEN_VERTEX_CAP {
        return Err(OracleError::CapExceeded {
            size,
            cap: EIGEN_VERTEX_CAP,
        });
    }
    let spec = &inst.spec;
    let classes = spec.n + 1;
    let dist = inst.distance_matrix();

    // Q- and P-numbers of the affine schemes are integers; the identity is
    // checked in cleared-denominator integer arithmetic.
    let q_int: Vec<Vec<i64>> = (0..classes)
        .map(|k| {
            (0..classes)
                .map(|j| {
                    let v = spec.q_number(k, j);
                    assert!(v.is_integer());
                    v.numer().to_i64().expect("Q-number fits i64")
                })
                .collect()
        })
        .collect();
    let p_int: Vec<i64> = (0..classes)
        .map(|k| {
            let v = spec.p_number(i, k);
            assert!(v.is_integer());
            v.numer().to_i64().expect("P-number fits i64")
        })
        .collect();

    let neighbors: Vec<Vec<usize>> = (0..size)
        .map(|u| (0..size).filter(|&w| dist[u][w] as usize == i).collect())
        .collect();

    for k in 0..classes {
        let qk = &q_int[k];
        let ok = (0..size).into_par_iter().all(|u| {
            (0..size).all(|v| {
                let lhs: i64 = neighbors[u]
                    .iter()
                    .map(|&w| qk[dist[w][v] as usize])
                    .sum();
                lhs == p_int[k] * qk[dist[u][v] as usize]
            })
        });
        assert!(
            ok,
            "idempotent relation failed for {spec} at i={i}, k={k}"
        );
    }
    Ok(p_int.into_iter().map(Rat::from_int).collect())
}

/// Exact maximum d-code via branch-and-bound maximum clique in the
/// "distance >= d" graph (greedy colouring bound, Tomita-style expansion).
/// Root branches run in parallel with a shared incumbent size; the reported
/// witness is recomputed deterministically from the optimal size.
pub fn max_code_bruteforce(
    inst: &MatrixSchemeInstance,
    d: usize,
    budget: Duration,
) -> Result<(usize, Vec<usize>), OracleError> {
    let n = inst.num_vertices();
    assert!(d <= inst.spec.n, "d out of range");
    if d == 0 || d == 1 {
        return Ok((n, (0..n).collect()));
    }
    let dist = inst.distance_matrix();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| u != v && dist[u][v] as usize >= d).collect())
        .collect();

    // Vertex order: degree descending, index ascending.
    let mut order: Vec<usize> = (0..n).collect();
    let degree: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
    order.sort_by_key(|&u| (usize::MAX - degree[u], u));

    let deadline = Instant::now() + budget;
    let best = std::sync::atomic::AtomicUsize::new(0);
    let timed_out = std::sync::atomic::AtomicBool::new(false);

    // Parallel phase: optimal size only.
    (0..n).into_par_iter().for_each(|root_pos| {
        if timed_out.load(std::sync::atomic::Ordering::Relaxed) {
            return;
        }
        let root = order[root_pos];
        // Candidates: neighbours appearing later in the order.
        let cands: Vec<usize> = order[root_pos + 1..]
            .iter()
            .copied()
            .filter(|&v| adj[root][v])
            .collect();
        if cands.len() < best.load(std::sync::atomic::Ordering::Relaxed) {
            return;
        }
        if expand_size(&adj, &mut vec![root], cands, &best, deadline).is_err() {
            timed_out.store(true, std::sync::atomic::Ordering::Relaxed);
        }
    });
    if timed_out.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(OracleError::TimeBudgetExceeded(budget));
    }
    let size = best.load(std::sync::atomic::Ordering::Relaxed);

    // Deterministic witness: first clique of the known optimal size in
    // search order.
    let mut witness = Vec::new();
    let found = find_clique_of_size(&adj, size, &mut Vec::new(), &order, &mut witness);
    debug_assert!(found, "a clique of the optimal size exists");
    witness.sort_unstable();
    Ok((size, witness))
}

/// Greedy colouring upper bound; candidates come back sorted so that
/// highest-colour vertices are expanded first.
fn color_sort(adj: &[Vec<bool>], cands: &[usize]) -> Vec<(usize, usize)> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in cands {
        match classes
            .iter_mut()
            .find(|class| class.iter().all(|&u| !adj[u][v]))
        {
            Some(class) => class.push(v),
            None => classes.push(vec![v]),
        }
    }
    let mut out = Vec::with_capacity(cands.len());
    for (color, class) in classes.iter().enumerate() {
        for &v in class {
            out.push((v, color + 1));
        }
    }
    out
}

fn expand_size(
    adj: &[Vec<bool>],
    clique: &mut Vec<usize>,
    cands: Vec<usize>,
    best: &std::sync::atomic::AtomicUsize,
    deadline: Instant,
) -> Result<(), ()> {
    use std::sync::atomic::Ordering;
    if Instant::now() > deadline {
        return Err(());
    }
    if cands.is_empty() {
        best.fetch_max(clique.len(), Ordering::Relaxed);
        return Ok(());
    }
    let colored = color_sort(adj, &cands);
    for idx in (0..colored.len()).rev() {
        let (v, color) = colored[idx];
        if clique.len() + color <= best.load(Ordering::Relaxed) {
            return Ok(());
        }
        let next: Vec<usize> = colored[..idx]
            .iter()
            .map(|&(u, _)| u)
            .filter(|&u| adj[v][u])
            .collect();
        clique.push(v);
        expand_size(adj, clique, next, best, deadline)?;
        clique.pop();
    }
    best.fetch_max(clique.len(), Ordering::Relaxed);
    Ok(())
}

fn find_clique_of_size(
    adj: &[Vec<bool>],
    size: usize,
    clique: &mut Vec<usize>,
    cands: &[usize],
    out: &mut Vec<usize>,
) -> bool {
    if clique.len() == size {
        *out = clique.clone();
        return true;
    }
    if clique.len() + cands.len() < size {
        return false;
    }
    for (pos, &v) in cands.iter().enumerate() {
        if !clique.iter().all(|&u| adj[u][v]) {
            continue;
        }
        clique.push(v);
        let rest: Vec<usize> = cands[pos + 1..]
            .iter()
            .copied()
            .filter(|&u| adj[v][u])
            .collect();
        if find_clique_of_size(adj, size, clique, &rest, out) {
            return true;
        }
        clique.pop();
    }
    false
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsetCheckReport {
    pub trials: usize,
    pub all_nonnegative: bool,
    pub min_dual_entry: Rat,
}

/// For random nonempty subsets, compute the true inner distribution by pair
/// counting and its dual transform, asserting every dual entry nonnegative.
pub fn random_subset_dual_check(
    inst: &MatrixSchemeInstance,
    trials: usize,
    seed: u64,
) -> SubsetCheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = inst.num_vertices();
    let mut min_entry = Rat::zero();
    let mut all_nonneg = true;
    for _ in 0..trials {
        let size = rng.gen_range(1..=n);
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(&mut rng);
        pool.truncate(size);
        let inner = subset_inner_distribution(inst, &pool);
        let dual = crate::certificates::dual_transform(&inst.spec, &inner);
        for entry in &dual.entries {
            if entry < &min_entry {
                min_entry = entry.clone();
                all_nonneg = false;
            }
        }
    }
    SubsetCheckReport {
        trials,
        all_nonnegative: all_nonneg,
        min_dual_entry: min_entry,
    }
}

/// The inner distribution of an explicit subset, by exhaustive pair counting.
pub fn subset_inner_distribution(inst: &MatrixSchemeInstance, subset: &[usize]) -> DistVector {
    let classes = inst.spec.n + 1;
    let mut counts = vec![0u64; classes];
    for &a in subset {
        for &b in subset {
            counts[inst.distance(a, b)] += 1;
        }
    }
    let size = Rat::from_int(subset.len() as i64);
    let entries = counts
        .into_iter()
        .map(|c| Rat::from_int(c as i64) / &size)
        .collect();
    DistVector::new(entries, DistKind::Inner)
}
