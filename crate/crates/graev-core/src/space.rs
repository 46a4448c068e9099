//! The ground pseudometric space `(X, rho)` with a distinguished point `e`.
//!
//! Index 0 is always `e`. Distinct points at distance 0 are allowed and never
//! merged: the distance is a pseudometric, not a metric.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationReport, Violation};

/// Index of the distinguished point `e`.
pub const E_INDEX: usize = 0;

/// Absolute tolerance for axiom checks and equality comparisons on floats.
pub const AXIOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    /// Explicit symmetric table of distances.
    Matrix { dist: Vec<Vec<f64>> },
    /// Point cloud; the distance is the Euclidean norm of the difference.
    Euclidean { coords: Vec<Vec<f64>> },
}

/// A finite indexed pseudometric space with distinguished point `e` at index 0.
///
/// Every public constructor validates its input, so a held `GroundSpace` is
/// always a valid pseudometric space (axioms within [`AXIOM_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct GroundSpace {
    labels: Vec<String>,
    kind: SpaceKind,
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| if i == 0 { "e".to_string() } else { format!("p{i}") })
        .collect()
}

/// Structural checks for a distance table: square, finite, non-negative.
fn check_table_structure(dist: &[Vec<f64>]) -> Result<()> {
    let n = dist.len();
    if n == 0 {
        return Err(Error::Malformed("empty distance table".into()));
    }
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Malformed(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Malformed(format!("non-finite entry at ({i},{j})")));
            }
            if v < 0.0 {
                return Err(Error::Malformed(format!(
                    "negative entry {v} at ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

/// Check a structurally sound distance table against the pseudometric axioms:
/// zero diagonal, symmetry, and the triangle inequality, all to [`AXIOM_TOL`].
pub fn validate_table(dist: &[Vec<f64>]) -> ValidationReport {
    let n = dist.len();
    let mut report = ValidationReport::default();
    for i in 0..n {
        if dist[i][i].abs() > AXIOM_TOL {
            report.violations.push(Violation::NonzeroDiagonal {
                index: i,
                value: dist[i][i],
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (dist[i][j] - dist[j][i]).abs() > AXIOM_TOL {
                report.violations.push(Violation::Asymmetric {
                    i,
                    j,
                    dij: dist[i][j],
                    dji: dist[j][i],
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let via = dist[i][j] + dist[j][k];
                if dist[i][k] > via + AXIOM_TOL {
                    report.violations.push(Violation::TriangleFailure {
                        i,
                        j,
                        k,
                        direct: dist[i][k],
                        via,
                    });
                }
            }
        }
    }
    report
}

impl GroundSpace {
    pub fn from_matrix(dist: Vec<Vec<f64>>) -> Result<Self> {
        let labels = default_labels(dist.len());
        Self::from_matrix_labeled(labels, dist)
    }

    pub fn from_matrix_labeled(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self> {
        check_table_structure(&dist)?;
        check_labels(&labels, dist.len())?;
        let report = validate_table(&dist);
        if !report.is_valid() {
            return Err(Error::InvalidSpace { report });
        }
        Ok(GroundSpace {
            labels,
            kind: SpaceKind::Matrix { dist },
        })
    }

    pub fn from_points(coords: Vec<Vec<f64>>) -> Result<Self> {
        let labels = default_labels(coords.len());
        Self::from_points_labeled(labels, coords)
    }

    pub fn from_points_labeled(labels: Vec<String>, coords: Vec<Vec<f64>>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Malformed("empty point list".into()));
        }
        let dim = coords[0].len();
        for (i, c) in coords.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::Malformed(format!(
                    "point {i} has dimension {}, expected {dim}",
                    c.len()
                )));
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::Malformed(format!("non-finite coordinate at point {i}")));
            }
        }
        check_labels(&labels, coords.len())?;
        Ok(GroundSpace {
            labels,
            kind: SpaceKind::Euclidean { coords },
        })
    }

    /// Number of points, including `e`.
    pub fn len(&self) -> usize {
        match &self.kind {
            SpaceKind::Matrix { dist } => dist.len(),
            SpaceKind::Euclidean { coords } => coords.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            SpaceKind::Matrix { .. } => "matrix",
            SpaceKind::Euclidean { .. } => "euclidean",
        }
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self.kind, SpaceKind::Euclidean { .. })
    }

    /// Coordinates of point `i` for euclidean spaces, `None` for matrix kind.
    pub fn coords(&self, i: usize) -> Option<&[f64]> {
        match &self.kind {
            SpaceKind::Euclidean { coords } => coords.get(i).map(|c| c.as_slice()),
            SpaceKind::Matrix { .. } => None,
        }
    }

    /// rho(i, j). Panics on out-of-range indices; use [`Self::try_distance`]
    /// where indices come from user input.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        match &self.kind {
            SpaceKind::Matrix { dist } => dist[i][j],
            SpaceKind::Euclidean { coords } => euclidean(&coords[i], &coords[j]),
        }
    }

    pub fn try_distance(&self, i: usize, j: usize) -> Result<f64> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.distance(i, j))
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Re-run the axiom checks on the held data. Constructors already enforce
    /// validity, so this reports empty unless the space was built by
    /// [`combine_sup`](crate::metrics::combine_sup) paths under test.
    pub fn validate(&self) -> ValidationReport {
        match &self.kind {
            SpaceKind::Matrix { dist } => validate_table(dist),
            // Euclidean distances satisfy the axioms by construction.
            SpaceKind::Euclidean { .. } => ValidationReport::default(),
        }
    }

    /// Append a point to a euclidean space and return its index. The lab uses
    /// this to register discovered limit points.
    pub fn push_point(&mut self, point: Vec<f64>) -> Result<usize> {
        match &mut self.kind {
            SpaceKind::Euclidean { coords } => {
                if point.len() != coords[0].len() {
                    return Err(Error::Malformed(format!(
                        "point has dimension {}, expected {}",
                        point.len(),
                        coords[0].len()
                    )));
                }
                if point.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Malformed("non-finite coordinate".into()));
                }
                coords.push(point);
                let idx = coords.len() - 1;
                self.labels.push(format!("p{idx}"));
                Ok(idx)
            }
            SpaceKind::Matrix { .. } => Err(Error::Malformed(
                "cannot append points to a matrix-kind space".into(),
            )),
        }
    }
}

fn check_labels(labels: &[String], n: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::Malformed(format!(
            "{} labels for {n} points",
            labels.len()
        )));
    }
    if labels[0] != "e" {
        return Err(Error::Malformed(format!(
            "index 0 must be the distinguished point labeled \"e\", found {:?}",
            labels[0]
        )));
    }
    Ok(())
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// On-disk JSON representation of a space.
#[derive(Debug, Serialize, Deserialize)]
pub struct SpaceFile {
    pub kind: String,
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
}

impl SpaceFile {
    fn structural(self) -> Result<(Vec<String>, SpaceKind)> {
        match self.kind.as_str() {
            "matrix" => {
                let dist = self
                    .dist
                    .ok_or_else(|| Error::Malformed("matrix kind requires `dist`".into()))?;
                check_table_structure(&dist)?;
                check_labels(&self.labels, dist.len())?;
                Ok((self.labels, SpaceKind::Matrix { dist }))
            }
            "euclidean" => {
                let coords = self
                    .coords
                    .ok_or_else(|| Error::Malformed("euclidean kind requires `coords`".into()))?;
                let space = GroundSpace::from_points_labeled(self.labels, coords)?;
                Ok((space.labels, space.kind))
            }
            other => Err(Error::Malformed(format!("unknown space kind {other:?}"))),
        }
    }
}

/// Parse and fully validate a space (structure and axioms).
pub fn space_from_json(text: &str) -> Result<GroundSpace> {
    let file: SpaceFile = serde_json::from_str(text)?;
    let (labels, kind) = file.structural()?;
    match kind {
        SpaceKind::Matrix { dist } => GroundSpace::from_matrix_labeled(labels, dist),
        SpaceKind::Euclidean { coords } => GroundSpace::from_points_labeled(labels, coords),
    }
}

/// Parse a space and report axiom violations instead of rejecting them.
/// Structural problems are still hard errors.
pub fn validate_space_json(text: &str) -> Result<ValidationReport> {
    let file: SpaceFile = serde_json::from_str(text)?;
    let (_labels, kind) = file.structural()?;
    Ok(match kind {
        SpaceKind::Matrix { dist } => validate_table(&dist),
        SpaceKind::Euclidean { .. } => ValidationReport::default(),
    })
}

pub fn space_to_json(space: &GroundSpace) -> String {
    let file = match &space.kind {
        SpaceKind::Matrix { dist } => SpaceFile {
            kind: "matrix".into(),
            labels: space.labels.clone(),
            dist: Some(dist.clone()),
            coords: None,
        },
        SpaceKind::Euclidean { coords } => SpaceFile {
            kind: "euclidean".into(),
            labels: space.labels.clone(),
            dist: None,
            coords: Some(coords.clone()),
        },
    };
    serde_json::to_string_pretty(&file).expect("space serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// e=0, a=1, b=2, c=4 on the real line.
    pub(crate) fn line_space() -> GroundSpace {
        GroundSpace::from_points(vec![vec![0.0], vec![1.0], vec![2.0], vec![4.0]]).unwrap()
    }

    #[test]
    fn two_point_metric_is_valid() {
        let s = GroundSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(s.validate().is_valid());
        assert_eq!(s.distance(0, 1), 1.0);
    }

    #[test]
    fn pseudometric_allows_zero_between_distinct_points() {
        let s = GroundSpace::from_matrix(vec![
            vec![0.0, 5.0, 5.0],
            vec![5.0, 0.0, 0.0],
            vec![5.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(s.distance(1, 2), 0.0);
        assert!(s.validate().is_valid());
    }

    #[test]
    fn triangle_violation_is_reported_with_witnesses() {
        let dist = vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ];
        // Brute-force check over all index triples finds (0,1,2): 3 > 1+1.
        let report = validate_table(&dist);
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::TriangleFailure { i: 0, j: 1, k: 2, .. }
        )));
        assert!(matches!(
            GroundSpace::from_matrix(dist),
            Err(Error::InvalidSpace { .. })
        ));
    }

    #[test]
    fn structural_errors_are_distinct_from_axiom_violations() {
        let nonsquare = vec![vec![0.0, 1.0], vec![1.0]];
        assert!(matches!(
            GroundSpace::from_matrix(nonsquare),
            Err(Error::Malformed(_))
        ));
        let negative = vec![vec![0.0, -1.0], vec![-1.0, 0.0]];
        assert!(matches!(
            GroundSpace::from_matrix(negative),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn line_distances() {
        let s = line_space();
        assert_eq!(s.distance(1, 3), 3.0); // |1 - 4|
        assert_eq!(s.distance(0, 0), 0.0);
        assert_eq!(s.distance(2, 1), s.distance(1, 2));
    }

    #[test]
    fn distance_errors_on_out_of_range() {
        let s = line_space();
        assert!(matches!(
            s.try_distance(0, 9),
            Err(Error::IndexOutOfRange { index: 9, len: 4 })
        ));
    }

    #[test]
    fn json_round_trip_and_e_label_enforcement() {
        let s = line_space();
        let text = space_to_json(&s);
        let back = space_from_json(&text).unwrap();
        assert_eq!(s, back);

        let bad = r#"{"kind":"matrix","labels":["x","y"],"dist":[[0,1],[1,0]]}"#;
        assert!(matches!(space_from_json(bad), Err(Error::Malformed(_))));
    }

    #[test]
    fn validate_json_reports_without_rejecting() {
        let text = r#"{"kind":"matrix","labels":["e","a","b"],
                       "dist":[[0,1,3],[1,0,1],[3,1,0]]}"#;
        let report = validate_space_json(text).unwrap();
        assert_eq!(report.violations.len(), 2); // (0,1,2) and (2,1,0)
    }

    #[test]
    fn push_point_grows_euclidean_spaces_only() {
        let mut s = line_space();
        let idx = s.push_point(vec![7.0]).unwrap();
        assert_eq!(idx, 4);
        assert_eq!(s.distance(0, 4), 7.0);

        let mut m = GroundSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(m.push_point(vec![1.0]).is_err());
    }
}
