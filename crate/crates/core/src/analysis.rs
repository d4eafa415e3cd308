//! Suite coverage (convex-hull volume in feature space) and feature-to-score
//! correlation.
//!
//! Hull volume uses three routes: zero for affinely dependent inputs, the
//! exact determinant formula when the hull is a simplex, and a deterministic
//! Monte-Carlo estimate otherwise. Monte-Carlo membership is an exact
//! convex-combination feasibility test (phase-1 simplex with Bland's rule)
//! at 1e-9 tolerance; no facet enumeration is ever performed.

use crate::features::FeatureVector;
use crate::rng::stream_rng;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("point {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("coordinate {value} of point {index} lies outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("input lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("at least two observations are required")]
    TooFewObservations,
    #[error("no feature record for benchmark '{0}'")]
    MissingFeature(String),
    #[error("score table is empty")]
    EmptyScores,
}

/// How a hull volume was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HullMethod {
    /// Affinely dependent input; the volume is exactly zero.
    Degenerate,
    /// Exactly `d + 1` distinct points: determinant formula.
    Simplex,
    /// Bounding-box rejection sampling with feasibility membership.
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HullVolume {
    pub volume: f64,
    /// Standard error of the estimate; zero for exact routes.
    pub std_err: f64,
    pub samples: u64,
    pub method: HullMethod,
}

/// Default Monte-Carlo sample count.
pub const DEFAULT_HULL_SAMPLES: u64 = 10_000_000;
const MEMBERSHIP_TOL: f64 = 1e-9;

/// Volume of the convex hull of points in `[0, 1]^d` with the default
/// sample budget and seed 0.
pub fn hull_volume(points: &[Vec<f64>]) -> Result<HullVolume, AnalysisError> {
    hull_volume_with(points, DEFAULT_HULL_SAMPLES, 0)
}

/// Volume of the convex hull with an explicit Monte-Carlo budget and seed.
pub fn hull_volume_with(
    points: &[Vec<f64>],
    samples: u64,
    seed: u64,
) -> Result<HullVolume, AnalysisError> {
    if points.is_empty() {
        return Ok(HullVolume {
            volume: 0.0,
            std_err: 0.0,
            samples: 0,
            method: HullMethod::Degenerate,
        });
    }
    let d = points[0].len();
    for (index, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(AnalysisError::DimensionMismatch {
                index,
                expected: d,
                got: p.len(),
            });
        }
        for &v in p {
            if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(AnalysisError::OutOfRange { index, value: v });
            }
        }
    }

    // drop exact duplicates
    let mut distinct: Vec<Vec<f64>> = Vec::new();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    for p in points {
        let key: Vec<u64> = p.iter().map(|v| v.to_bits()).collect();
        if seen.insert(key) {
            distinct.push(p.clone());
        }
    }

    if affine_rank(&distinct, d) < d {
        return Ok(HullVolume {
            volume: 0.0,
            std_err: 0.0,
            samples: 0,
            method: HullMethod::Degenerate,
        });
    }

    if distinct.len() == d + 1 {
        let volume = simplex_volume(&distinct, d);
        return Ok(HullVolume {
            volume,
            std_err: 0.0,
            samples: 0,
            method: HullMethod::Simplex,
        });
    }

    // Monte-Carlo over the bounding box
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in &distinct {
        for (k, &v) in p.iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();

    const CHUNK: u64 = 8192;
    let chunks = samples.div_ceil(CHUNK);
    let inside: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, chunk);
            let from = chunk * CHUNK;
            let upto = ((chunk + 1) * CHUNK).min(samples);
            let mut point = vec![0.0; d];
            let mut tester = HullTester::new(distinct.len(), d);
            let mut count = 0u64;
            for _ in from..upto {
                for k in 0..d {
                    point[k] = lo[k] + (hi[k] - lo[k]) * rng.gen::<f64>();
                }
                if tester.in_hull(&distinct, &point) {
                    count += 1;
                }
            }
            count
        })
        .sum();

    let p = inside as f64 / samples as f64;
    Ok(HullVolume {
        volume: box_vol * p,
        std_err: box_vol * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        method: HullMethod::MonteCarlo,
    })
}

/// Rank of the affine span of the points (Gaussian elimination on the
/// difference vectors).
fn affine_rank(points: &[Vec<f64>], d: usize) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let mut rows: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    let mut rank = 0;
    for col in 0..d {
        let Some(pivot) = (rank..rows.len()).max_by(|&a, &b| {
            rows[a][col]
                .abs()
                .partial_cmp(&rows[b][col].abs())
                .unwrap()
        }) else {
            break;
        };
        if rows[pivot][col].abs() < 1e-12 {
            continue;
        }
        rows.swap(rank, pivot);
        for r in (rank + 1)..rows.len() {
            let f = rows[r][col] / rows[rank][col];
            for k in col..d {
                rows[r][k] -= f * rows[rank][k];
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// `|det(p_1 - p_0, ..., p_d - p_0)| / d!` via LU with partial pivoting.
fn simplex_volume(points: &[Vec<f64>], d: usize) -> f64 {
    let mut m: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    let mut det = 1.0f64;
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col].abs() < 1e-300 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for r in (col + 1)..d {
            let f = m[r][col] / m[col][col];
            for k in col..d {
                m[r][k] -= f * m[col][k];
            }
        }
    }
    let factorial: f64 = (1..=d).map(|k| k as f64).product();
    det.abs() / factorial
}

/// Scratch buffers for the feasibility solve, reused across samples.
struct HullTester {
    rows: usize,
    cols: usize,
    tableau: Vec<f64>,
    basis: Vec<usize>,
}

impl HullTester {
    fn new(m: usize, d: usize) -> Self {
        let rows = d + 1;
        let cols = m + rows + 1;
        HullTester {
            rows,
            cols,
            tableau: vec![0.0; rows * cols],
            basis: vec![0; rows],
        }
    }

    /// Exact convex-combination feasibility: does some `w >= 0` with
    /// `sum w = 1` satisfy `P w = x`? Solved as a phase-1 simplex over the
    /// constraints with one artificial variable per row; Bland's rule keeps
    /// the pivoting deterministic and cycle-free. Feasible when the minimal
    /// total infeasibility falls below `MEMBERSHIP_TOL`.
    fn in_hull(&mut self, points: &[Vec<f64>], x: &[f64]) -> bool {
        let m = points.len();
        let d = x.len();
        let rows = self.rows;
        let cols = self.cols;
        let t = &mut self.tableau;
        t.fill(0.0);

        // constraint rows: [P | I | b] with b >= 0 (rows are flipped when
        // a coordinate is negative, which cannot happen in [0,1]^d, but the
        // guard keeps the solver generic)
        for r in 0..rows {
            let b = if r < d { x[r] } else { 1.0 };
            let flip = b < 0.0;
            let sign = if flip { -1.0 } else { 1.0 };
            for (j, p) in points.iter().enumerate() {
                let a = if r < d { p[r] } else { 1.0 };
                t[r * cols + j] = sign * a;
            }
            t[r * cols + m + r] = 1.0;
            t[r * cols + cols - 1] = sign * b;
            self.basis[r] = m + r;
        }

        // phase-1 objective row (stored separately): reduced costs for the
        // artificial-sum objective are the negated column sums
        let mut obj = vec![0.0; cols];
        for j in 0..cols {
            if (m..m + rows).contains(&j) {
                continue;
            }
            let mut s = 0.0;
            for r in 0..rows {
                s += t[r * cols + j];
            }
            obj[j] = -s;
        }

        const EPS: f64 = 1e-12;
        let mut pivots = 0usize;
        loop {
            // Bland: entering column = lowest index with negative reduced cost
            let Some(enter) = (0..m).find(|&j| obj[j] < -EPS) else {
                break;
            };
            // ratio test, ties broken by lowest row index
            let mut leave: Option<usize> = None;
            let mut best = f64::INFINITY;
            for r in 0..rows {
                let a = t[r * cols + enter];
                if a > EPS {
                    let ratio = t[r * cols + cols - 1] / a;
                    if ratio < best - EPS {
                        best = ratio;
                        leave = Some(r);
                    }
                }
            }
            let Some(lr) = leave else {
                break; // unbounded cannot happen on a bounded feasible set
            };
            // pivot
            let piv = t[lr * cols + enter];
            for j in 0..cols {
                t[lr * cols + j] /= piv;
            }
            for r in 0..rows {
                if r != lr {
                    let f = t[r * cols + enter];
                    if f != 0.0 {
                        for j in 0..cols {
                            t[r * cols + j] -= f * t[lr * cols + j];
                        }
                    }
                }
            }
            let f = obj[enter];
            if f != 0.0 {
                for j in 0..cols {
                    obj[j] -= f * t[lr * cols + j];
                }
            }
            self.basis[lr] = enter;
            pivots += 1;
            if pivots > 50 * (m + rows) {
                break; // defensive cap; Bland's rule terminates long before
            }
        }

        // total infeasibility = sum of artificial basic values
        let mut infeasibility = 0.0;
        for r in 0..rows {
            if self.basis[r] >= m {
                infeasibility += t[r * cols + cols - 1].max(0.0);
            }
        }
        infeasibility <= MEMBERSHIP_TOL
    }
}

/// The synthetic coverage suite: the origin plus the six unit vectors, whose
/// hull is the standard 6-simplex of volume `1/720`.
pub fn synthetic_suite_points() -> Vec<Vec<f64>> {
    let mut points = vec![vec![0.0; 6]];
    for k in 0..6 {
        let mut p = vec![0.0; 6];
        p[k] = 1.0;
        points.push(p);
    }
    points
}

/// Ordinary-least-squares coefficient of determination of `y` on `x`.
/// Returns zero when either variable has no variance.
pub fn linear_r2(x: &[f64], y: &[f64]) -> Result<f64, AnalysisError> {
    if x.len() != y.len() {
        return Err(AnalysisError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(AnalysisError::TooFewObservations);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        syy += (yi - my) * (yi - my);
        sxy += (xi - mx) * (yi - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Ok(0.0);
    }
    Ok(((sxy * sxy) / (sxx * syy)).clamp(0.0, 1.0))
}

/// Feature vector plus raw counts for one benchmark instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub benchmark_id: String,
    pub family: String,
    pub features: FeatureVector,
    pub qubits: usize,
    pub depth: usize,
    pub two_qubit_gates: usize,
}

/// Aggregated score for one (benchmark, backend) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub benchmark_id: String,
    pub family: String,
    pub backend: String,
    pub mean_score: f64,
    pub std_dev: f64,
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreTable {
    pub rows: Vec<ScoreRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub axes: Vec<String>,
    pub backends: Vec<String>,
    /// `r2[axis][backend]`
    pub r2: Vec<Vec<f64>>,
}

/// Per-(axis, backend) coefficient of determination between a feature axis
/// (independent) and the mean benchmark score (dependent). With
/// `extra_axes`, circuit depth, qubit count, and two-qubit-gate count join
/// the six features.
pub fn correlation_table(
    features: &[FeatureRecord],
    scores: &ScoreTable,
    extra_axes: bool,
) -> Result<CorrelationTable, AnalysisError> {
    if scores.rows.is_empty() {
        return Err(AnalysisError::EmptyScores);
    }
    let mut axes: Vec<String> = FeatureVector::AXES.iter().map(|s| s.to_string()).collect();
    if extra_axes {
        axes.push("depth".to_string());
        axes.push("qubits".to_string());
        axes.push("two_qubit_gates".to_string());
    }
    let lookup = |id: &str| features.iter().find(|f| f.benchmark_id == id);
    let mut backends: Vec<String> = scores
        .rows
        .iter()
        .map(|r| r.backend.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    backends.sort();

    let axis_value = |f: &FeatureRecord, axis: usize| -> f64 {
        if axis < 6 {
            f.features.as_array()[axis]
        } else {
            match axis {
                6 => f.depth as f64,
                7 => f.qubits as f64,
                _ => f.two_qubit_gates as f64,
            }
        }
    };

    let mut r2 = vec![vec![0.0; backends.len()]; axes.len()];
    for (b, backend) in backends.iter().enumerate() {
        let rows: Vec<&ScoreRow> = scores
            .rows
            .iter()
            .filter(|r| &r.backend == backend)
            .collect();
        let mut xs: Vec<Vec<f64>> = vec![Vec::with_capacity(rows.len()); axes.len()];
        let mut ys: Vec<f64> = Vec::with_capacity(rows.len());
        for row in rows {
            let feat = lookup(&row.benchmark_id)
                .ok_or_else(|| AnalysisError::MissingFeature(row.benchmark_id.clone()))?;
            for (a, x) in xs.iter_mut().enumerate() {
                x.push(axis_value(feat, a));
            }
            ys.push(row.mean_score);
        }
        for (a, x) in xs.iter().enumerate() {
            r2[a][b] = if ys.len() < 2 {
                0.0
            } else {
                linear_r2(x, &ys)?
            };
        }
    }
    Ok(CorrelationTable { axes, backends, r2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_simplex_volume_is_one_over_720() {
        let v = hull_volume(&synthetic_suite_points()).unwrap();
        assert_eq!(v.method, HullMethod::Simplex);
        assert!((v.volume - 1.0 / 720.0).abs() < 1e-15);
    }

    #[test]
    fn too_few_points_are_degenerate() {
        let pts: Vec<Vec<f64>> = (0..6).map(|k| {
            let mut p = vec![0.0; 6];
            p[k] = 1.0;
            p
        })
        .collect();
        let v = hull_volume(&pts).unwrap();
        assert_eq!(v.method, HullMethod::Degenerate);
        assert_eq!(v.volume, 0.0);
        assert_eq!(hull_volume(&[]).unwrap().volume, 0.0);
    }

    #[test]
    fn two_dimensional_sanity_triangle() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let v = hull_volume(&pts).unwrap();
        assert_eq!(v.method, HullMethod::Simplex);
        assert!((v.volume - 0.5).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_coordinates_are_rejected() {
        let pts = vec![vec![0.0, 1.5]];
        assert!(matches!(
            hull_volume(&pts),
            Err(AnalysisError::OutOfRange { .. })
        ));
    }

    #[test]
    fn box_volume_is_product_of_lengths() {
        // vertices of [0, 0.5] x [0, 1] x [0, 0.25] in 3-D; the bounding box
        // equals the hull, so every sample is inside and the estimate exact
        let lens = [0.5, 1.0, 0.25];
        let mut pts = Vec::new();
        for mask in 0..8u32 {
            pts.push(
                (0..3)
                    .map(|k| if mask >> k & 1 == 1 { lens[k] } else { 0.0 })
                    .collect(),
            );
        }
        let v = hull_volume_with(&pts, 20_000, 1).unwrap();
        assert_eq!(v.method, HullMethod::MonteCarlo);
        assert_eq!(v.volume, 0.5 * 1.0 * 0.25);
        assert_eq!(v.std_err, 0.0);
    }

    #[test]
    fn monte_carlo_agrees_with_exact_simplex() {
        for seed in 0..3u64 {
            let mut rng = stream_rng(900 + seed, 0);
            let pts: Vec<Vec<f64>> = (0..7)
                .map(|_| (0..6).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let exact = hull_volume(&pts).unwrap();
            if exact.method != HullMethod::Simplex {
                continue;
            }
            // interior point forces the Monte-Carlo route without changing
            // the hull
            let centroid: Vec<f64> = (0..6)
                .map(|k| pts.iter().map(|p| p[k]).sum::<f64>() / 7.0)
                .collect();
            let mut with_inner = pts.clone();
            with_inner.push(centroid);
            let mc = hull_volume_with(&with_inner, 400_000, seed).unwrap();
            assert_eq!(mc.method, HullMethod::MonteCarlo);
            let slack = 3.0 * mc.std_err + 1e-12;
            assert!(
                (mc.volume - exact.volume).abs() <= slack,
                "seed {seed}: mc {} vs exact {} (se {})",
                mc.volume,
                exact.volume,
                mc.std_err
            );
        }
    }

    #[test]
    fn hull_volume_is_permutation_and_interior_invariant() {
        let pts = synthetic_suite_points();
        let mut rev = pts.clone();
        rev.reverse();
        let a = hull_volume(&pts).unwrap();
        let b = hull_volume(&rev).unwrap();
        assert_eq!(a.volume, b.volume);
    }

    #[test]
    fn r2_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [2.0, 4.0, 6.0, 8.0];
        assert!((linear_r2(&x, &y).unwrap() - 1.0).abs() < 1e-12);

        let x = [-1.0, 0.0, 1.0];
        let y = [1.0, 0.0, 1.0];
        assert_eq!(linear_r2(&x, &y).unwrap(), 0.0);

        let x = [2.0, 2.0, 2.0];
        let y = [1.0, 2.0, 3.0];
        assert_eq!(linear_r2(&x, &y).unwrap(), 0.0);

        assert!(matches!(
            linear_r2(&[1.0], &[1.0, 2.0]),
            Err(AnalysisError::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn r2_is_affine_invariant() {
        let x = [0.1, 0.4, 0.7, 0.2, 0.9];
        let y = [3.0, 1.0, 4.0, 1.0, 5.0];
        let base = linear_r2(&x, &y).unwrap();
        let x2: Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let y2: Vec<f64> = y.iter().map(|v| -0.5 * v + 7.0).collect();
        assert!((linear_r2(&x2, &y2).unwrap() - base).abs() < 1e-12);
    }

    fn record(id: &str, family: &str, e: f64) -> FeatureRecord {
        FeatureRecord {
            benchmark_id: id.to_string(),
            family: family.to_string(),
            features: FeatureVector {
                communication: 0.5,
                critical_depth: 0.5,
                entanglement: e,
                parallelism: 0.5,
                liveness: 0.5,
                measurement: 0.0,
            },
            qubits: 4,
            depth: 10,
            two_qubit_gates: 5,
        }
    }

    #[test]
    fn correlation_table_detects_linear_feature() {
        let features: Vec<FeatureRecord> = (0..5)
            .map(|k| record(&format!("b{k}"), "ghz", 0.1 + 0.2 * k as f64))
            .collect();
        let scores = ScoreTable {
            rows: (0..5)
                .map(|k| ScoreRow {
                    benchmark_id: format!("b{k}"),
                    family: "ghz".to_string(),
                    backend: "sim".to_string(),
                    mean_score: 0.9 - 0.1 * (0.1 + 0.2 * k as f64),
                    std_dev: 0.0,
                    repetitions: 1,
                })
                .collect(),
        };
        let t = correlation_table(&features, &scores, false).unwrap();
        let e_axis = t.axes.iter().position(|a| a == "entanglement").unwrap();
        assert!((t.r2[e_axis][0] - 1.0).abs() < 1e-9);
        // all other axes are constant -> zero-variance convention
        for (a, _) in t.axes.iter().enumerate() {
            if a != e_axis {
                assert_eq!(t.r2[a][0], 0.0);
            }
        }
    }

    #[test]
    fn identical_scores_give_zero_r2_everywhere() {
        let features: Vec<FeatureRecord> = (0..4)
            .map(|k| record(&format!("b{k}"), "ghz", 0.2 * k as f64))
            .collect();
        let scores = ScoreTable {
            rows: (0..4)
                .map(|k| ScoreRow {
                    benchmark_id: format!("b{k}"),
                    family: "ghz".to_string(),
                    backend: "sim".to_string(),
                    mean_score: 0.42,
                    std_dev: 0.0,
                    repetitions: 2,
                })
                .collect(),
        };
        let t = correlation_table(&features, &scores, true).unwrap();
        assert_eq!(t.axes.len(), 9);
        for row in &t.r2 {
            assert!(row.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn missing_feature_record_is_an_error_naming_the_benchmark() {
        let scores = ScoreTable {
            rows: vec![ScoreRow {
                benchmark_id: "ghost".to_string(),
                family: "ghz".to_string(),
                backend: "sim".to_string(),
                mean_score: 0.5,
                std_dev: 0.0,
                repetitions: 1,
            },
            ScoreRow {
                benchmark_id: "ghost2".to_string(),
                family: "ghz".to_string(),
                backend: "sim".to_string(),
                mean_score: 0.6,
                std_dev: 0.0,
                repetitions: 1,
            }],
        };
        match correlation_table(&[], &scores, false).unwrap_err() {
            AnalysisError::MissingFeature(id) => assert_eq!(id, "ghost"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exclusion_is_row_removal() {
        let features: Vec<FeatureRecord> = vec![
            record("a", "ghz", 0.1),
            record("b", "bit_code", 0.5),
            record("c", "vqe", 0.9),
        ];
        let mk = |ids: &[(&str, &str, f64)]| ScoreTable {
            rows: ids
                .iter()
                .map(|(id, fam, s)| ScoreRow {
                    benchmark_id: id.to_string(),
                    family: fam.to_string(),
                    backend: "sim".to_string(),
                    mean_score: *s,
                    std_dev: 0.0,
                    repetitions: 1,
                })
                .collect(),
        };
        let full = mk(&[("a", "ghz", 0.9), ("b", "bit_code", 0.3), ("c", "vqe", 0.8)]);
        let filtered_rows: Vec<ScoreRow> = full
            .rows
            .iter()
            .filter(|r| r.family != "bit_code")
            .cloned()
            .collect();
        let filtered = ScoreTable {
            rows: filtered_rows,
        };
        let direct = mk(&[("a", "ghz", 0.9), ("c", "vqe", 0.8)]);
        let t1 = correlation_table(&features, &filtered, false).unwrap();
        let t2 = correlation_table(&features, &direct, false).unwrap();
        assert_eq!(t1, t2);
    }
}
