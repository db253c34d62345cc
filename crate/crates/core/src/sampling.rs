//! Expected sampling sets, the reconstruction condition, and selection of
//! sampling nodes by greedy, exhaustive, or random strategies.
//!
//! A node belongs to the expected sampling set exactly when its sampling
//! probability is positive. Selection scores a candidate set S through
//! f(sum_{i in S} [p_i/(1+sigma_i^2)] c_i c_i^T) with f either the log
//! pseudo-determinant or the minimum eigenvalue of the weighted Gram.

use crate::graph::FrequencySupport;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SamplingError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("probability {value} out of [0,1] at node {node}")]
    InvalidProbability { node: usize, value: f64 },
    #[error("noise variance {value} invalid at node {node}")]
    InvalidVariance { node: usize, value: f64 },
    #[error("matrix is not symmetric (deviation {0:.3e})")]
    NotSymmetric(f64),
    #[error("eigendecomposition failure")]
    EigendecompositionFailure,
    #[error("budget {budget} out of range 1..={n}")]
    BudgetOutOfRange { budget: usize, n: usize },
    #[error("C({n},{budget}) exceeds the {cap} combination cap")]
    TooManyCombinations { n: usize, budget: usize, cap: u64 },
    #[error("node index {index} out of range for {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },
}

/// Per-node sampling probabilities and observation-noise variances.
///
/// The expected sampling set is derived, not stored: it is the set of
/// nodes with p_i > 0.
#[derive(Debug, Clone)]
pub struct SamplingDesign {
    probabilities: Vec<f64>,
    noise_variances: Vec<f64>,
}

impl SamplingDesign {
    pub fn new(probabilities: Vec<f64>, noise_variances: Vec<f64>) -> Result<Self, SamplingError> {
        if probabilities.len() != noise_variances.len() {
            return Err(SamplingError::DimensionMismatch {
                expected: probabilities.len(),
                got: noise_variances.len(),
            });
        }
        for (node, &p) in probabilities.iter().enumerate() {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(SamplingError::InvalidProbability { node, value: p });
            }
        }
        for (node, &v) in noise_variances.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(SamplingError::InvalidVariance { node, value: v });
            }
        }
        Ok(Self { probabilities, noise_variances })
    }

    /// Uniform probability `p` on `set`, zero elsewhere, noiseless.
    pub fn uniform_on(set: &[usize], n: usize, p: f64) -> Result<Self, SamplingError> {
        let mut probs = vec![0.0; n];
        for &i in set {
            if i >= n {
                return Err(SamplingError::IndexOutOfRange { index: i, n });
            }
            probs[i] = p;
        }
        Self::new(probs, vec![0.0; n])
    }

    /// Deterministic sampling (p = 1) on `set`, noiseless.
    pub fn static_set(set: &[usize], n: usize) -> Result<Self, SamplingError> {
        Self::uniform_on(set, n, 1.0)
    }

    /// Same probabilities, different noise variances.
    pub fn with_noise(&self, noise_variances: Vec<f64>) -> Result<Self, SamplingError> {
        Self::new(self.probabilities.clone(), noise_variances)
    }

    pub fn n_nodes(&self) -> usize {
        self.probabilities.len()
    }

    pub fn probability(&self, node: usize) -> f64 {
        self.probabilities[node]
    }

    pub fn noise_variance(&self, node: usize) -> f64 {
        self.noise_variances[node]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn noise_variances(&self) -> &[f64] {
        &self.noise_variances
    }

    /// Expected sampling set: nodes with p_i > 0, ascending.
    pub fn expected_set(&self) -> Vec<usize> {
        (0..self.n_nodes()).filter(|&i| self.probabilities[i] > 0.0).collect()
    }

    /// Selection weight p_i / (1 + sigma_i^2).
    pub fn selection_weight(&self, node: usize) -> f64 {
        self.probabilities[node] / (1.0 + self.noise_variances[node])
    }
}

/// Invertibility measure applied to the weighted Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionObjective {
    /// Log pseudo-determinant (zero eigenvalues skipped).
    MaxDet,
    /// Minimum eigenvalue; the MaxDet value breaks ties while the Gram is
    /// still rank-deficient.
    MaxLambdaMin,
}

/// Largest singular value of D_{Sc} U_F, and whether it certifies
/// reconstruction (norm < 1 - 1e-9).
pub fn reconstruction_condition(
    support: &FrequencySupport,
    expected_set: &[usize],
) -> Result<(bool, f64), SamplingError> {
    let n = support.n_nodes();
    let mut in_set = vec![false; n];
    for &i in expected_set {
        if i >= n {
            return Err(SamplingError::IndexOutOfRange { index: i, n });
        }
        in_set[i] = true;
    }
    let complement: Vec<usize> = (0..n).filter(|&i| !in_set[i]).collect();
    if complement.is_empty() {
        return Ok((true, 0.0));
    }
    let mut rows = DMatrix::zeros(complement.len(), support.bandwidth());
    for (r, &i) in complement.iter().enumerate() {
        rows.row_mut(r).copy_from(&support.columns().row(i));
    }
    let norm = rows.singular_values().max();
    Ok((norm < 1.0 - 1e-9, norm))
}

/// Expected Gram matrix U_F^T P U_F = sum_i p_i c_i c_i^T.
pub fn expected_gram(
    support: &FrequencySupport,
    design: &SamplingDesign,
) -> Result<DMatrix<f64>, SamplingError> {
    if design.n_nodes() != support.n_nodes() {
        return Err(SamplingError::DimensionMismatch {
            expected: support.n_nodes(),
            got: design.n_nodes(),
        });
    }
    let f = support.bandwidth();
    let mut gram = DMatrix::zeros(f, f);
    for i in 0..support.n_nodes() {
        let p = design.probability(i);
        if p > 0.0 {
            let c = support.row(i);
            gram += p * &c * c.transpose();
        }
    }
    Ok(gram)
}

/// Log pseudo-determinant: sum of ln(lambda) over eigenvalues above
/// 1e-10 * lambda_max. The zero matrix scores -inf.
pub fn log_pseudo_det(m: &DMatrix<f64>) -> Result<f64, SamplingError> {
    let dev = (m - m.transpose()).abs().max();
    if dev > 1e-10 {
        return Err(SamplingError::NotSymmetric(dev));
    }
    let eigenvalues = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, 100_000)
        .ok_or(SamplingError::EigendecompositionFailure)?
        .eigenvalues;
    let lambda_max = eigenvalues.max();
    if lambda_max <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let threshold = 1e-10 * lambda_max;
    Ok(eigenvalues.iter().filter(|&&l| l > threshold).map(|&l| l.ln()).sum())
}

/// Weighted Gram of a candidate set, accumulated in ascending node order so
/// the distributed protocol reproduces the exact same floating-point value.
pub fn weighted_gram(
    support: &FrequencySupport,
    design: &SamplingDesign,
    set: &[usize],
) -> Result<DMatrix<f64>, SamplingError> {
    let f = support.bandwidth();
    let n = support.n_nodes();
    let mut members = set.to_vec();
    members.sort_unstable();
    let mut gram = DMatrix::zeros(f, f);
    for &i in &members {
        if i >= n {
            return Err(SamplingError::IndexOutOfRange { index: i, n });
        }
        let c = support.row(i);
        gram += design.selection_weight(i) * &c * c.transpose();
    }
    Ok(gram)
}

/// Objective value h(S) of a candidate set. The empty set scores -inf, so a
/// greedy pass needs no special first iteration.
pub fn objective_value(
    objective: SelectionObjective,
    support: &FrequencySupport,
    design: &SamplingDesign,
    set: &[usize],
) -> Result<f64, SamplingError> {
    Ok(scored_value(objective, support, design, set)?.0)
}

/// (primary, tie-break) score of a candidate set.
///
/// MaxDet: primary is the log pseudo-determinant, tie-break unused.
/// MaxLambdaMin: primary is the minimum Gram eigenvalue, structurally zero
/// while |S| < |F|; the MaxDet value breaks ties inside that phase.
pub(crate) fn scored_value(
    objective: SelectionObjective,
    support: &FrequencySupport,
    design: &SamplingDesign,
    set: &[usize],
) -> Result<(f64, f64), SamplingError> {
    if set.is_empty() {
        return Ok((f64::NEG_INFINITY, f64::NEG_INFINITY));
    }
    let gram = weighted_gram(support, design, set)?;
    scored_gram_value(objective, support.bandwidth(), set.len(), &gram)
}

/// Score a pre-assembled weighted Gram (shared with the distributed
/// protocol, whose nodes build the Gram from flooded rows).
pub(crate) fn scored_gram_value(
    objective: SelectionObjective,
    bandwidth: usize,
    set_len: usize,
    gram: &DMatrix<f64>,
) -> Result<(f64, f64), SamplingError> {
    match objective {
        SelectionObjective::MaxDet => Ok((log_pseudo_det(gram)?, 0.0)),
        SelectionObjective::MaxLambdaMin => {
            let lambda_min = if set_len < bandwidth {
                0.0
            } else {
                nalgebra::SymmetricEigen::try_new(gram.clone(), f64::EPSILON, 100_000)
                    .ok_or(SamplingError::EigendecompositionFailure)?
                    .eigenvalues
                    .min()
                    .max(0.0)
            };
            Ok((lambda_min, log_pseudo_det(gram)?))
        }
    }
}

/// Greedy selection: iteratively add the node maximizing h(S ∪ {j}).
/// Ties break toward the lowest node index. Returns nodes in pick order.
pub fn greedy_select(
    objective: SelectionObjective,
    support: &FrequencySupport,
    design: &SamplingDesign,
    budget: usize,
) -> Result<Vec<usize>, SamplingError> {
    let n = support.n_nodes();
    if budget == 0 || budget > n {
        return Err(SamplingError::BudgetOutOfRange { budget, n });
    }
    let mut selected: Vec<usize> = Vec::with_capacity(budget);
    let mut in_set = vec![false; n];
    for _ in 0..budget {
        let mut best: Option<(usize, (f64, f64))> = None;
        let mut candidate = selected.clone();
        for j in 0..n {
            if in_set[j] {
                continue;
            }
            candidate.push(j);
            let score = scored_value(objective, support, design, &candidate)?;
            candidate.pop();
            // strict improvement keeps the lowest index on ties
            if best.as_ref().is_none_or(|(_, b)| score > *b) {
                best = Some((j, score));
            }
        }
        let (winner, _) = best.expect("budget <= n leaves a candidate");
        selected.push(winner);
        in_set[winner] = true;
    }
    Ok(selected)
}

/// Combination cap for exhaustive search.
pub const EXHAUSTIVE_CAP: u64 = 1_000_000;

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut value = 1u64;
    for i in 0..k {
        value = value.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    value
}

/// Exhaustive search over all size-`budget` subsets under a caller-supplied
/// score. Subsets are visited in lexicographic order and the first optimum
/// is kept, so ties resolve deterministically.
pub fn exhaustive_select(
    mut score: impl FnMut(&[usize]) -> f64,
    n: usize,
    budget: usize,
) -> Result<Vec<usize>, SamplingError> {
    if budget == 0 || budget > n {
        return Err(SamplingError::BudgetOutOfRange { budget, n });
    }
    if binomial(n, budget) > EXHAUSTIVE_CAP {
        return Err(SamplingError::TooManyCombinations { n, budget, cap: EXHAUSTIVE_CAP });
    }
    let mut subset: Vec<usize> = (0..budget).collect();
    let mut best = subset.clone();
    let mut best_value = score(&subset);
    loop {
        // advance to the next lexicographic combination
        let mut i = budget;
        loop {
            if i == 0 {
                return Ok(best);
            }
            i -= 1;
            if subset[i] != i + n - budget {
                break;
            }
        }
        subset[i] += 1;
        for k in (i + 1)..budget {
            subset[k] = subset[k - 1] + 1;
        }
        let value = score(&subset);
        if value > best_value {
            best_value = value;
            best.copy_from_slice(&subset);
        }
    }
}

/// Uniform subset of `budget` nodes without replacement, reproducible per
/// seed. Returned ascending.
pub fn random_select(n: usize, budget: usize, seed: u64) -> Result<Vec<usize>, SamplingError> {
    if budget == 0 || budget > n {
        return Err(SamplingError::BudgetOutOfRange { budget, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = rand::seq::index::sample(&mut rng, n, budget).into_vec();
    chosen.sort_unstable();
    Ok(chosen)
}

/// Render a selection as `rank,node,objective_value` CSV (selection order,
/// objective evaluated on the prefix up to each rank).
pub fn selection_csv(
    objective: SelectionObjective,
    support: &FrequencySupport,
    design: &SamplingDesign,
    selection: &[usize],
) -> Result<String, SamplingError> {
    let mut out = String::from("rank,node,objective_value\n");
    let mut so_far: Vec<usize> = Vec::new();
    for (rank, &node) in selection.iter().enumerate() {
        so_far.push(node);
        let value = objective_value(objective, support, design, &so_far)?;
        writeln!(out, "{rank},{node},{value}").unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::{Graph, SpectralBasis};
    use crate::rng::{Purpose, SeedSplitter};
    use nalgebra::DVector;

    fn support_for(g: &Graph, bandwidth: usize) -> FrequencySupport {
        let basis = SpectralBasis::new(g).unwrap();
        FrequencySupport::lowest(&basis, bandwidth).unwrap()
    }

    #[test]
    fn reconstruction_condition_examples() {
        let g = generators::complete(6);
        let support = support_for(&g, 3);
        let (ok, norm) = reconstruction_condition(&support, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(ok);
        assert_eq!(norm, 0.0);
        // fewer nodes than the bandwidth can never satisfy the condition
        let (ok, norm) = reconstruction_condition(&support, &[0, 1]).unwrap();
        assert!(!ok);
        assert!(norm >= 1.0 - 1e-12);
    }

    #[test]
    fn expected_gram_examples() {
        let g = generators::path(5);
        let support = support_for(&g, 3);
        let all: Vec<usize> = (0..5).collect();
        let ones = SamplingDesign::static_set(&all, 5).unwrap();
        let gram = expected_gram(&support, &ones).unwrap();
        assert!((gram - DMatrix::identity(3, 3)).abs().max() < 1e-10);

        let zeros = SamplingDesign::uniform_on(&[], 5, 0.5).unwrap();
        let gram = expected_gram(&support, &zeros).unwrap();
        assert_eq!(gram, DMatrix::zeros(3, 3));
    }

    #[test]
    fn gram_rank_matches_unweighted_rank() {
        let g = generators::path(6);
        let support = support_for(&g, 3);
        let set = [1, 3, 4];
        let design = SamplingDesign::uniform_on(&set, 6, 0.3).unwrap();
        let weighted = expected_gram(&support, &design).unwrap();
        let unweighted =
            expected_gram(&support, &SamplingDesign::static_set(&set, 6).unwrap()).unwrap();
        let rank_of = |m: &DMatrix<f64>| {
            let ev = m.clone().symmetric_eigenvalues();
            let top = ev.max().max(1e-300);
            ev.iter().filter(|&&l| l > 1e-10 * top).count()
        };
        assert_eq!(rank_of(&weighted), rank_of(&unweighted));
    }

    #[test]
    fn log_pseudo_det_examples() {
        assert_eq!(log_pseudo_det(&DMatrix::identity(3, 3)).unwrap(), 0.0);
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.0]));
        assert!((log_pseudo_det(&m).unwrap() - 2.0_f64.ln()).abs() < 1e-12);
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0]));
        assert!((log_pseudo_det(&m).unwrap() - 6.0_f64.ln()).abs() < 1e-12);
        assert_eq!(log_pseudo_det(&DMatrix::zeros(2, 2)).unwrap(), f64::NEG_INFINITY);
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(log_pseudo_det(&asym), Err(SamplingError::NotSymmetric(_))));
    }

    #[test]
    fn objective_examples() {
        let g = generators::complete(4);
        let support = support_for(&g, 2);
        let all: Vec<usize> = (0..4).collect();
        let design = SamplingDesign::static_set(&all, 4).unwrap();
        assert_eq!(
            objective_value(SelectionObjective::MaxDet, &support, &design, &[]).unwrap(),
            f64::NEG_INFINITY
        );
        // sigma = 0, p = 1, full set: log det (U_F^T U_F) = 0
        let v = objective_value(SelectionObjective::MaxDet, &support, &design, &all).unwrap();
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn doubling_weights_shifts_maxdet_by_rank_ln2() {
        let mut rng = SeedSplitter::new(33).stream(0, 0, Purpose::Scenario);
        let g = generators::connected_erdos_renyi(8, 0.4, &mut rng, 100).unwrap();
        let support = support_for(&g, 3);
        let set = [0, 2, 5, 6];
        let base = SamplingDesign::uniform_on(&set, 8, 0.4).unwrap();
        let doubled = SamplingDesign::uniform_on(&set, 8, 0.8).unwrap();
        let v1 = objective_value(SelectionObjective::MaxDet, &support, &base, &set).unwrap();
        let v2 = objective_value(SelectionObjective::MaxDet, &support, &doubled, &set).unwrap();
        let rank = 3.0; // 4 generic rows, bandwidth 3
        assert!((v2 - v1 - rank * 2.0_f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn greedy_first_pick_is_largest_magnitude_row() {
        // |F| = 1: the single-element objective ln(w c_i^2) ranks nodes by
        // the magnitude of their regression scalar.
        let g = generators::path(3);
        let basis = SpectralBasis::new(&g).unwrap();
        let support = FrequencySupport::new(&basis, &[1]).unwrap();
        let design = SamplingDesign::static_set(&[0, 1, 2], 3).unwrap();
        let magnitudes: Vec<f64> = (0..3).map(|i| support.row(i)[0].abs()).collect();
        let expect = (0..3)
            .max_by(|&a, &b| magnitudes[a].partial_cmp(&magnitudes[b]).unwrap())
            .unwrap();
        let picks = greedy_select(SelectionObjective::MaxDet, &support, &design, 1).unwrap();
        assert_eq!(picks, vec![expect]);
    }

    #[test]
    fn greedy_budget_n_selects_everything() {
        let g = generators::complete(5);
        let support = support_for(&g, 2);
        let design = SamplingDesign::static_set(&[0, 1, 2, 3, 4], 5).unwrap();
        let mut picks = greedy_select(SelectionObjective::MaxDet, &support, &design, 5).unwrap();
        picks.sort_unstable();
        assert_eq!(picks, vec![0, 1, 2, 3, 4]);
        assert!(matches!(
            greedy_select(SelectionObjective::MaxDet, &support, &design, 6),
            Err(SamplingError::BudgetOutOfRange { .. })
        ));
    }

    #[test]
    fn exhaustive_examples() {
        let g = generators::path(6);
        let support = support_for(&g, 2);
        let design = SamplingDesign::static_set(&(0..6).collect::<Vec<_>>(), 6).unwrap();

        let full = exhaustive_select(|_| 1.0, 6, 6).unwrap();
        assert_eq!(full, vec![0, 1, 2, 3, 4, 5]);

        // budget 1: identical criterion to greedy's first pick
        let score = |s: &[usize]| {
            objective_value(SelectionObjective::MaxDet, &support, &design, s).unwrap()
        };
        let best1 = exhaustive_select(score, 6, 1).unwrap();
        let greedy1 = greedy_select(SelectionObjective::MaxDet, &support, &design, 1).unwrap();
        assert_eq!(best1, greedy1);

        // exhaustive dominates greedy
        let best3 = exhaustive_select(score, 6, 3).unwrap();
        let greedy3 = greedy_select(SelectionObjective::MaxDet, &support, &design, 3).unwrap();
        assert!(score(&best3) >= score(&greedy3) - 1e-12);

        assert!(matches!(
            exhaustive_select(|_| 0.0, 100, 50),
            Err(SamplingError::TooManyCombinations { .. })
        ));
    }

    #[test]
    fn random_select_contract() {
        assert_eq!(random_select(7, 7, 1).unwrap(), vec![0, 1, 2, 3, 4, 5, 6]);
        let a = random_select(20, 5, 99).unwrap();
        let b = random_select(20, 5, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(random_select(5, 6, 0).is_err());
    }

    #[test]
    fn recon_condition_implies_invertible_gram() {
        let mut rng = SeedSplitter::new(5).stream(0, 0, Purpose::Scenario);
        for trial in 0..20u64 {
            let g = generators::connected_erdos_renyi(9, 0.35, &mut rng, 100).unwrap();
            let support = support_for(&g, 3);
            let set = random_select(9, 5, 1000 + trial).unwrap();
            let (ok, _) = reconstruction_condition(&support, &set).unwrap();
            if !ok {
                continue;
            }
            let design = SamplingDesign::uniform_on(&set, 9, 0.6).unwrap();
            let gram = expected_gram(&support, &design).unwrap();
            let min_ev = gram.symmetric_eigenvalues().min();
            assert!(min_ev > 0.0, "condition satisfied but gram singular (trial {trial})");
        }
    }

    #[test]
    fn greedy_invariant_to_uniform_weight_scaling() {
        let mut rng = SeedSplitter::new(8).stream(0, 0, Purpose::Scenario);
        let g = generators::connected_erdos_renyi(9, 0.4, &mut rng, 100).unwrap();
        let support = support_for(&g, 3);
        let all: Vec<usize> = (0..9).collect();
        let base = SamplingDesign::uniform_on(&all, 9, 0.25).unwrap();
        let scaled = SamplingDesign::uniform_on(&all, 9, 0.75).unwrap();
        for objective in [SelectionObjective::MaxDet, SelectionObjective::MaxLambdaMin] {
            let a = greedy_select(objective, &support, &base, 5).unwrap();
            let b = greedy_select(objective, &support, &scaled, 5).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn selection_csv_shape() {
        let g = generators::complete(4);
        let support = support_for(&g, 2);
        let design = SamplingDesign::static_set(&[0, 1, 2, 3], 4).unwrap();
        let picks = greedy_select(SelectionObjective::MaxDet, &support, &design, 3).unwrap();
        let csv = selection_csv(SelectionObjective::MaxDet, &support, &design, &picks).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "rank,node,objective_value");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,"));
    }
}
