//! Signless Laplacian `Q = D + A` and certified largest-eigenvalue brackets.
//!
//! The estimator is plain power iteration. For a positive vector `v` and an
//! irreducible nonnegative matrix `M`, every Collatz–Wielandt quotient
//! `(Mv)_i / v_i` lies between `min_i` and `max_i` of the Perron root, so the
//! bracket is valid after every step; convergence only narrows it. The
//! floating-point evaluation of each quotient is widened by a forward
//! rounding-error allowance so the bracket stays an enclosure.
//!
//! A cyclic Jacobi eigensolver on the explicit dense matrix serves as an
//! independent oracle for tests and sweeps.

use crate::graph::Graph;
use serde::{Deserialize, Serialize};

/// Default iteration cap for a single estimate.
pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;
/// Budget ceiling when a threshold comparison keeps iterating past tolerance.
pub const ESCALATION_MAX_ITERATIONS: usize = 1_000_000;
/// Largest order accepted by the dense oracle.
pub const DENSE_ORACLE_MAX_ORDER: usize = 400;

const JACOBI_OFF_NORM: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("vector has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the zero vector has no Rayleigh quotient")]
    ZeroVector,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("dense oracle supports at most {DENSE_ORACLE_MAX_ORDER} vertices, got {0}")]
    OracleTooLarge(usize),
    #[error("estimate did not converge")]
    NotConverged,
    #[error("the edge bound needs at least two vertices, got {0}")]
    TooFewVertices(usize),
    #[error("witness vector must be strictly positive")]
    NonPositiveWitness,
}

/// The two operators whose Perron root is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operator {
    /// `Q = D + A`.
    SignlessLaplacian,
    /// `A`; iterated as `A + I` so bipartite graphs do not oscillate.
    Adjacency,
}

/// Certified bracket on the largest eigenvalue, plus the final iterate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub lower: f64,
    pub upper: f64,
    /// Unit vector whose quotients produced the bracket; zero outside the
    /// maximising component of a disconnected graph.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl SpectralEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    /// Whether `value` lies inside the bracket.
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl PowerOptions {
    pub fn new(tolerance: f64) -> Self {
        PowerOptions {
            tolerance,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

fn check_len(g: &Graph, v: &[f64]) -> Result<(), SpectralError> {
    if v.len() != g.order() {
        return Err(SpectralError::LengthMismatch {
            expected: g.order(),
            got: v.len(),
        });
    }
    Ok(())
}

fn apply_into(op: Operator, g: &Graph, v: &[f64], out: &mut [f64]) {
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in g.neighbors(i) {
            acc += v[j];
        }
        *slot = match op {
            Operator::SignlessLaplacian => g.degree(i) as f64 * v[i] + acc,
            Operator::Adjacency => v[i] + acc,
        };
    }
}

/// `Q v` without materialising `Q`.
pub fn q_apply(g: &Graph, v: &[f64]) -> Result<Vec<f64>, SpectralError> {
    check_len(g, v)?;
    let mut out = vec![0.0; v.len()];
    apply_into(Operator::SignlessLaplacian, g, v, &mut out);
    Ok(out)
}

/// `Σ_{ij ∈ E} (v_i + v_j)^2 / ⟨v, v⟩`.
pub fn rayleigh_q(g: &Graph, v: &[f64]) -> Result<f64, SpectralError> {
    check_len(g, v)?;
    let norm2: f64 = v.iter().map(|x| x * x).sum();
    if norm2 == 0.0 {
        return Err(SpectralError::ZeroVector);
    }
    let num: f64 = g.edges().map(|(i, j)| (v[i] + v[j]).powi(2)).sum();
    Ok(num / norm2)
}

/// Exact Rayleigh quotient of an integer vector as `(numerator, denominator)`.
pub fn exact_rayleigh_q(g: &Graph, v: &[i64]) -> Result<(i128, i128), SpectralError> {
    if v.len() != g.order() {
        return Err(SpectralError::LengthMismatch {
            expected: g.order(),
            got: v.len(),
        });
    }
    let den: i128 = v.iter().map(|&x| (x as i128) * (x as i128)).sum();
    if den == 0 {
        return Err(SpectralError::ZeroVector);
    }
    let num: i128 = g
        .edges()
        .map(|(i, j)| {
            let s = v[i] as i128 + v[j] as i128;
            s * s
        })
        .sum();
    Ok((num, den))
}

/// Exact Collatz–Wielandt upper quotient `max_i (Qv)_i / v_i` of a positive
/// integer vector, as `(numerator, denominator)`.
pub fn exact_collatz_upper(g: &Graph, v: &[i64]) -> Result<(i128, i128), SpectralError> {
    if v.len() != g.order() {
        return Err(SpectralError::LengthMismatch {
            expected: g.order(),
            got: v.len(),
        });
    }
    if v.iter().any(|&x| x <= 0) {
        return Err(SpectralError::NonPositiveWitness);
    }
    let mut best: Option<(i128, i128)> = None;
    for i in 0..g.order() {
        let qv = g.degree(i) as i128 * v[i] as i128 + g.neighbors(i).map(|j| v[j] as i128).sum::<i128>();
        let cand = (qv, v[i] as i128);
        best = match best {
            Some((bn, bd)) if bn * cand.1 >= cand.0 * bd => Some((bn, bd)),
            _ => Some(cand),
        };
    }
    best.ok_or(SpectralError::ZeroVector)
}

/// Result of comparing the Perron root with a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdDecision {
    AtLeast,
    Below,
    Undecided,
}

/// Power iteration on one connected graph with at least two vertices.
struct PowerRun<'a> {
    g: &'a Graph,
    op: Operator,
    v: Vec<f64>,
    w: Vec<f64>,
    lower: f64,
    upper: f64,
    iterations: usize,
    rounding: f64,
}

impl<'a> PowerRun<'a> {
    fn new(g: &'a Graph, op: Operator) -> Self {
        let mut v: Vec<f64> = (0..g.order()).map(|i| g.degree(i) as f64 + 1.0).collect();
        normalize(&mut v);
        // Each (Mv)_i sums at most Δ+1 nonnegative terms; the quotient adds one more rounding.
        let rounding = 4.0 * (g.max_degree() as f64 + 3.0) * f64::EPSILON;
        PowerRun {
            g,
            op,
            w: vec![0.0; v.len()],
            v,
            lower: 0.0,
            upper: f64::INFINITY,
            iterations: 0,
            rounding,
        }
    }

    /// Evaluates the bracket of the current iterate and advances it.
    fn step(&mut self) {
        apply_into(self.op, self.g, &self.v, &mut self.w);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for (wi, vi) in self.w.iter().zip(&self.v) {
            let r = wi / vi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let lo = lo * (1.0 - self.rounding);
        let hi = hi * (1.0 + self.rounding);
        let shift = match self.op {
            Operator::SignlessLaplacian => 0.0,
            Operator::Adjacency => 1.0,
        };
        self.lower = self.lower.max(lo - shift);
        self.upper = self.upper.min(hi - shift);
        self.iterations += 1;
        std::mem::swap(&mut self.v, &mut self.w);
        normalize(&mut self.v);
        // A vanishing entry would void the quotient bound; on a connected graph
        // with positive start this only happens through underflow.
        for x in self.v.iter_mut() {
            if *x < f64::MIN_POSITIVE {
                *x = f64::MIN_POSITIVE;
            }
        }
    }

    /// The iterate whose quotients were evaluated last (before normalisation
    /// the roles of `v` and `w` swap, so this is `w` after `step`).
    fn estimate(&self, converged: bool, previous: &[f64]) -> SpectralEstimate {
        SpectralEstimate {
            lower: self.lower,
            upper: self.upper,
            vector: previous.to_vec(),
            iterations: self.iterations,
            converged,
        }
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Iterates until `done(lower, upper)` or the budget is spent; returns the
/// bracket together with the unit iterate that produced the last quotients.
fn run_connected(
    g: &Graph,
    op: Operator,
    max_iterations: usize,
    mut done: impl FnMut(f64, f64) -> bool,
) -> SpectralEstimate {
    let mut run = PowerRun::new(g, op);
    let mut last = run.v.clone();
    let mut best_width = f64::INFINITY;
    let mut stalled = 0usize;
    while run.iterations < max_iterations {
        last.copy_from_slice(&run.v);
        run.step();
        if done(run.lower, run.upper) {
            return run.estimate(true, &last);
        }
        let width = run.upper - run.lower;
        if width < 0.999 * best_width {
            best_width = width;
            stalled = 0;
        } else {
            stalled += 1;
            // The bracket has hit the rounding floor.
            if stalled > 2_000 {
                break;
            }
        }
    }
    run.estimate(false, &last)
}

/// Runs `per_component` on every component and combines the brackets.
fn by_component(
    g: &Graph,
    op: Operator,
    mut per_component: impl FnMut(&Graph) -> SpectralEstimate,
) -> SpectralEstimate {
    let n = g.order();
    if n == 0 {
        return SpectralEstimate {
            lower: 0.0,
            upper: 0.0,
            vector: Vec::new(),
            iterations: 0,
            converged: true,
        };
    }
    let trivial = |size: usize| SpectralEstimate {
        lower: 0.0,
        upper: 0.0,
        vector: vec![1.0; size],
        iterations: 0,
        converged: true,
    };
    if g.is_connected() {
        return if n == 1 { trivial(1) } else { per_component(g) };
    }
    let _ = op;
    let mut lower = 0.0f64;
    let mut upper = 0.0f64;
    let mut iterations = 0;
    let mut converged = true;
    let mut vector = vec![0.0; n];
    let mut best_upper = f64::NEG_INFINITY;
    for comp in g.components() {
        let est = if comp.len() == 1 {
            trivial(1)
        } else {
            per_component(&g.induced_subgraph(&comp))
        };
        iterations += est.iterations;
        converged &= est.converged;
        lower = lower.max(est.lower);
        upper = upper.max(est.upper);
        if est.upper > best_upper {
            best_upper = est.upper;
            vector.iter_mut().for_each(|x| *x = 0.0);
            for (&v, &x) in comp.iter().zip(&est.vector) {
                vector[v] = x;
            }
        }
    }
    SpectralEstimate {
        lower,
        upper,
        vector,
        iterations,
        converged,
    }
}

/// Certified bracket on the Perron root of `op` with width at most `tolerance`
/// on convergence.
pub fn perron_root(g: &Graph, op: Operator, opts: &PowerOptions) -> Result<SpectralEstimate, SpectralError> {
    if !(opts.tolerance > 0.0) {
        return Err(SpectralError::BadTolerance(opts.tolerance));
    }
    let tol = opts.tolerance;
    Ok(by_component(g, op, |h| {
        run_connected(h, op, opts.max_iterations, |lo, hi| hi - lo <= tol)
    }))
}

/// The Q-index `q(G)` to within `tolerance`.
pub fn q_index(g: &Graph, tolerance: f64) -> Result<SpectralEstimate, SpectralError> {
    perron_root(g, Operator::SignlessLaplacian, &PowerOptions::new(tolerance))
}

/// The adjacency spectral radius `λ(G)` to within `tolerance`.
pub fn adjacency_spectral_radius(g: &Graph, tolerance: f64) -> Result<SpectralEstimate, SpectralError> {
    perron_root(g, Operator::Adjacency, &PowerOptions::new(tolerance))
}

/// Decides `root ≥ threshold` from certified brackets only.
///
/// Iteration continues past `tolerance` (up to [`ESCALATION_MAX_ITERATIONS`])
/// while the bracket straddles the threshold; a bracket that stalls at the
/// rounding floor is reported as undecided.
pub fn compare_with_threshold(
    g: &Graph,
    op: Operator,
    threshold: f64,
    tolerance: f64,
) -> Result<(ThresholdDecision, SpectralEstimate), SpectralError> {
    if !(tolerance > 0.0) {
        return Err(SpectralError::BadTolerance(tolerance));
    }
    // The maximum over components is at least the threshold as soon as one
    // component is, and below it only when all are.
    let est = by_component(g, op, |h| {
        let mut reached_tol = false;
        run_connected(h, op, ESCALATION_MAX_ITERATIONS, |lo, hi| {
            reached_tol |= hi - lo <= tolerance;
            reached_tol && (lo >= threshold || hi < threshold)
        })
    });
    let decision = if est.lower >= threshold {
        ThresholdDecision::AtLeast
    } else if est.upper < threshold {
        ThresholdDecision::Below
    } else {
        ThresholdDecision::Undecided
    };
    Ok((decision, est))
}

/// Largest eigenvalue of `D + A` from the dense Jacobi solver.
pub fn q_index_dense_oracle(g: &Graph) -> Result<f64, SpectralError> {
    let n = g.order();
    if n > DENSE_ORACLE_MAX_ORDER {
        return Err(SpectralError::OracleTooLarge(n));
    }
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = g.degree(i) as f64;
        for j in g.neighbors(i) {
            m[i * n + j] = 1.0;
        }
    }
    Ok(jacobi_eigenvalues(m, n).into_iter().fold(0.0, f64::max))
}

/// Largest eigenvalue of `A` from the dense Jacobi solver.
pub fn adjacency_dense_oracle(g: &Graph) -> Result<f64, SpectralError> {
    let n = g.order();
    if n > DENSE_ORACLE_MAX_ORDER {
        return Err(SpectralError::OracleTooLarge(n));
    }
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in g.neighbors(i) {
            m[i * n + j] = 1.0;
        }
    }
    Ok(jacobi_eigenvalues(m, n).into_iter().fold(0.0, f64::max))
}

/// All eigenvalues of a symmetric row-major matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_OFF_NORM {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Residuals of the Perron eigen-equation and the pairwise difference identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResidualReport {
    /// `max_i |(q - d(i)) z_i - Σ_{j ∈ N(i)} z_j|`.
    pub vertex_residual: f64,
    /// Maximum over ordered pairs of the difference-identity residual.
    pub pair_residual: f64,
    pub bound: f64,
    pub passed: bool,
}

/// Checks `(q - d(i)) z_i = Σ_{N(i)} z_j` and, for every pair `i ≠ j`,
/// `(q - d(i))(z_i - z_j) = (d(i) - d(j)) z_j + Σ_{N(i)∖N(j)} z - Σ_{N(j)∖N(i)} z`,
/// using the bracket midpoint for `q`. Both residuals must stay below
/// `10 · tolerance · n`.
pub fn verify_eigen_identity(
    g: &Graph,
    est: &SpectralEstimate,
    tolerance: f64,
) -> Result<EigenResidualReport, SpectralError> {
    if !est.converged {
        return Err(SpectralError::NotConverged);
    }
    check_len(g, &est.vector)?;
    let n = g.order();
    let q = est.midpoint();
    let z = &est.vector;
    let deg = g.degrees();
    let mut vertex_residual = 0.0f64;
    for i in 0..n {
        let s: f64 = g.neighbors(i).map(|j| z[j]).sum();
        vertex_residual = vertex_residual.max(((q - deg[i] as f64) * z[i] - s).abs());
    }
    let words = g.row_words();
    let mut only_i = vec![0u64; words];
    let mut only_j = vec![0u64; words];
    let mut pair_residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for (w, (a, b)) in g.row(i).iter().zip(g.row(j)).enumerate() {
                only_i[w] = a & !b;
                only_j[w] = b & !a;
            }
            let plus: f64 = crate::graph::BitIter::over(&only_i).map(|k| z[k]).sum();
            let minus: f64 = crate::graph::BitIter::over(&only_j).map(|k| z[k]).sum();
            let lhs = (q - deg[i] as f64) * (z[i] - z[j]);
            let rhs = (deg[i] as f64 - deg[j] as f64) * z[j] + plus - minus;
            pair_residual = pair_residual.max((lhs - rhs).abs());
        }
    }
    let bound = 10.0 * tolerance * n as f64;
    Ok(EigenResidualReport {
        vertex_residual,
        pair_residual,
        bound,
        passed: vertex_residual <= bound && pair_residual <= bound,
    })
}

/// `2m/(n-1) + n - 2`.
pub fn q_upper_bound_edges(g: &Graph) -> Result<f64, SpectralError> {
    let n = g.order();
    if n < 2 {
        return Err(SpectralError::TooFewVertices(n));
    }
    Ok(2.0 * g.edge_count() as f64 / (n - 1) as f64 + n as f64 - 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, disjoint_union, empty, join, path, star};
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn q_apply_examples() {
        assert_eq!(q_apply(&complete(3), &[1.0, 1.0, 1.0]).unwrap(), vec![4.0; 3]);
        assert_eq!(q_apply(&path(3), &[1.0, 0.0, 0.0]).unwrap(), vec![1.0, 1.0, 0.0]);
        assert_eq!(q_apply(&empty(3), &[3.0, -1.0, 2.0]).unwrap(), vec![0.0; 3]);
        assert!(matches!(q_apply(&empty(3), &[1.0]), Err(SpectralError::LengthMismatch { .. })));
    }

    #[test]
    fn rayleigh_examples() {
        assert_eq!(rayleigh_q(&complete(2), &[1.0, 1.0]).unwrap(), 2.0);
        let g = cycle(7);
        assert!(close(rayleigh_q(&g, &[1.0; 7]).unwrap(), 4.0 * 7.0 / 7.0, 1e-12));
        assert_eq!(rayleigh_q(&g, &[0.0; 7]), Err(SpectralError::ZeroVector));
        // Clique indicator on K_100 ∪ K̄_2.
        let h = disjoint_union(&complete(100), &empty(2));
        let mut z = vec![1.0; 100];
        z.extend([0.0, 0.0]);
        assert!(close(rayleigh_q(&h, &z).unwrap(), 198.0, 1e-9));
    }

    #[test]
    fn closed_form_q_values() {
        let k4 = q_index(&complete(4), 1e-10).unwrap();
        assert!(k4.contains(6.0) && k4.converged);
        let c5 = q_index(&cycle(5), 1e-10).unwrap();
        assert!(close(c5.upper, 4.0, 1e-9));
        let h = disjoint_union(&complete(100), &empty(2));
        let est = q_index(&h, 1e-10).unwrap();
        assert!(close(est.lower, 198.0, 1e-9) && close(est.upper, 198.0, 1e-9));
        // 102-vertex graph K_100 ∪ K̄_2 has q = 198; the (103,3,3) clique is K_101.
        let h = disjoint_union(&complete(101), &empty(2));
        assert!(close(q_index(&h, 1e-10).unwrap().upper, 200.0, 1e-9));
    }

    #[test]
    fn dense_oracle_examples() {
        assert!(close(q_index_dense_oracle(&star(5)).unwrap(), 5.0, 1e-12));
        assert!(close(q_index_dense_oracle(&complete(4)).unwrap(), 6.0, 1e-12));
        // Q(P3) = [[1,1,0],[1,2,1],[0,1,1]] has characteristic polynomial -t(t-1)(t-3).
        assert!(close(q_index_dense_oracle(&path(3)).unwrap(), 3.0, 1e-12));
        assert!(matches!(q_index_dense_oracle(&empty(401)), Err(SpectralError::OracleTooLarge(401))));
    }

    #[test]
    fn adjacency_radius_examples() {
        for n in [2, 5, 9] {
            let est = adjacency_spectral_radius(&complete(n), 1e-10).unwrap();
            assert!(close(est.upper, (n - 1) as f64, 1e-9));
        }
        // Bipartite: plain power iteration on A would oscillate.
        let est = adjacency_spectral_radius(&cycle(6), 1e-10).unwrap();
        assert!(close(est.upper, 2.0, 1e-9) && est.converged);
        let est = adjacency_spectral_radius(&path(4), 1e-10).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(close(est.midpoint(), golden, 1e-9));
    }

    #[test]
    fn disconnected_inputs_take_the_largest_component() {
        let g = disjoint_union(&cycle(5), &complete(4));
        let est = q_index(&g, 1e-10).unwrap();
        assert!(close(est.upper, 6.0, 1e-9));
        assert!(est.vector[..5].iter().all(|&x| x == 0.0));
        assert!(est.vector[5..].iter().all(|&x| x > 0.0));
        let est = q_index(&empty(4), 1e-10).unwrap();
        assert_eq!((est.lower, est.upper), (0.0, 0.0));
        assert_eq!(q_index(&empty(0), 1e-10).unwrap().upper, 0.0);
        assert!(matches!(q_index(&empty(2), 0.0), Err(SpectralError::BadTolerance(_))));
    }

    #[test]
    fn eigen_identity_residuals() {
        let est = q_index(&complete(4), 1e-10).unwrap();
        let r = verify_eigen_identity(&complete(4), &est, 1e-10).unwrap();
        assert!(r.vertex_residual <= 1e-10 && r.pair_residual <= 1e-10);

        let est = q_index(&cycle(5), 1e-9).unwrap();
        let r = verify_eigen_identity(&cycle(5), &est, 1e-9).unwrap();
        assert!(r.passed && r.vertex_residual <= 1e-8 && r.pair_residual <= 1e-8);

        let mut unconverged = est.clone();
        unconverged.converged = false;
        assert_eq!(verify_eigen_identity(&cycle(5), &unconverged, 1e-9), Err(SpectralError::NotConverged));
    }

    #[test]
    fn edge_bound_examples() {
        assert!(close(q_upper_bound_edges(&complete(4)).unwrap(), 6.0, 1e-12));
        assert!(close(q_upper_bound_edges(&cycle(5)).unwrap(), 5.5, 1e-12));
        // Tight on the path P3 = K_{1,2}: bound 3 equals q.
        assert!(close(q_upper_bound_edges(&path(3)).unwrap(), 3.0, 1e-12));
        assert_eq!(q_upper_bound_edges(&empty(1)), Err(SpectralError::TooFewVertices(1)));
    }

    #[test]
    fn exact_witnesses() {
        // All-ones on a regular graph gives q exactly.
        assert_eq!(exact_rayleigh_q(&cycle(6), &[1; 6]).unwrap(), (24, 6));
        assert_eq!(exact_collatz_upper(&cycle(6), &[1; 6]).unwrap(), (4, 1));
        assert_eq!(exact_collatz_upper(&cycle(6), &[1, 1, 0, 1, 1, 1]), Err(SpectralError::NonPositiveWitness));
        let s = star(4);
        let (num, den) = exact_collatz_upper(&s, &[3, 1, 1, 1]).unwrap();
        assert_eq!(num * 1, 4 * den);
    }

    #[test]
    fn threshold_comparison() {
        let g = join(&complete(2), &cycle(6));
        let q = q_index_dense_oracle(&g).unwrap();
        let (d, est) = compare_with_threshold(&g, Operator::SignlessLaplacian, q - 1e-3, 1e-9).unwrap();
        assert_eq!(d, ThresholdDecision::AtLeast);
        assert!(est.contains(q));
        let (d, _) = compare_with_threshold(&g, Operator::SignlessLaplacian, q + 1e-3, 1e-9).unwrap();
        assert_eq!(d, ThresholdDecision::Below);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2usize..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut g = Graph::empty(n);
                let mut k = 0;
                for v in 1..n {
                    for u in 0..v {
                        if bits[k] {
                            g.add_edge(u, v);
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn agrees_with_dense_oracle(g in arb_graph(30)) {
            let oracle = q_index_dense_oracle(&g).unwrap();
            let est = q_index(&g, 1e-10).unwrap();
            prop_assert!(est.converged);
            prop_assert!((est.upper - oracle).abs() <= 1e-8);
            prop_assert!(est.contains(oracle), "{oracle} not in [{}, {}]", est.lower, est.upper);
        }

        #[test]
        fn rayleigh_never_exceeds_q(g in arb_graph(20), seed in proptest::collection::vec(-1.0f64..1.0, 20)) {
            let v: Vec<f64> = seed[..g.order()].to_vec();
            prop_assume!(v.iter().any(|&x| x != 0.0));
            let est = q_index(&g, 1e-10).unwrap();
            prop_assert!(rayleigh_q(&g, &v).unwrap() <= est.upper + 1e-9);
        }

        #[test]
        fn adding_an_edge_never_lowers_the_bracket(g in arb_graph(16), pick in any::<usize>()) {
            let complement: Vec<_> = g.complement().edges().collect();
            prop_assume!(!complement.is_empty());
            let (a, b) = complement[pick % complement.len()];
            let mut h = g.clone();
            h.add_edge(a, b);
            let before = q_index(&g, 1e-10).unwrap();
            let after = q_index(&h, 1e-10).unwrap();
            prop_assert!(after.lower >= before.lower - 1e-9);
            prop_assert!(q_index_dense_oracle(&h).unwrap() >= q_index_dense_oracle(&g).unwrap() - 1e-9);
        }

        #[test]
        fn regular_graphs_have_q_twice_the_degree(n in 3usize..40, d_half in 1usize..5) {
            // Circulant C_n(1..=r) is 2r-regular when 2r < n.
            let r = d_half.min((n - 1) / 2);
            let mut g = Graph::empty(n);
            for i in 0..n {
                for s in 1..=r {
                    let j = (i + s) % n;
                    if !g.has_edge(i, j) {
                        g.add_edge(i, j);
                    }
                }
            }
            let d = g.degree(0) as f64;
            let est = q_index(&g, 1e-10).unwrap();
            prop_assert!((est.upper - 2.0 * d).abs() <= 1e-9);
        }
    }
}
