//! Sequences of pseudometrics over one point set, with a closed-form tail so
//! that the n-th metric is computable for every n, and the sup-combination
//! that dominates the whole sequence inside a single ground distance.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::space::GroundSpace;

/// Rule describing `d_n` past the explicitly listed metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailRule {
    /// `d_n = d_L` for n > L.
    RepeatLast,
    /// `d_n = r^(n-L) * d_L` for n > L; requires r > 0.
    Scale(f64),
    /// `d_n = 0` for n > L.
    Zero,
}

impl Serialize for TailRule {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TailRule::RepeatLast => ser.serialize_str("repeat-last"),
            TailRule::Zero => ser.serialize_str("zero"),
            TailRule::Scale(r) => {
                use serde::ser::SerializeMap;
                let mut map = ser.serialize_map(Some(1))?;
                map.serialize_entry("scale", r)?;
                map.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for TailRule {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Name(String),
            Scale { scale: f64 },
        }
        match Repr::deserialize(de)? {
            Repr::Name(s) => match s.as_str() {
                "repeat-last" => Ok(TailRule::RepeatLast),
                "zero" => Ok(TailRule::Zero),
                other => Err(D::Error::custom(format!("unknown tail rule {other:?}"))),
            },
            Repr::Scale { scale } => Ok(TailRule::Scale(scale)),
        }
    }
}

/// A finite list of pseudometric tables `d_1..d_L` over a common point set,
/// extended to all n by the tail rule. Each table is validated against the
/// pseudometric axioms at construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudometricSequence {
    metrics: Vec<Vec<Vec<f64>>>,
    tail_rule: TailRule,
}

impl PseudometricSequence {
    pub fn new(metrics: Vec<Vec<Vec<f64>>>, tail_rule: TailRule) -> Result<Self> {
        if metrics.is_empty() {
            return Err(Error::Malformed("empty pseudometric sequence".into()));
        }
        let n = metrics[0].len();
        for (idx, table) in metrics.iter().enumerate() {
            if table.len() != n {
                return Err(Error::Malformed(format!(
                    "metric {idx} has {} points, expected {n}",
                    table.len()
                )));
            }
            // Reuse the space constructor for structure and axiom checks.
            GroundSpace::from_matrix(table.clone()).map_err(|e| match e {
                Error::InvalidSpace { report } => Error::InvalidSpace { report },
                other => other,
            })?;
        }
        if let TailRule::Scale(r) = tail_rule {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::Malformed(format!(
                    "scale tail factor must be positive and finite, got {r}"
                )));
            }
        }
        Ok(PseudometricSequence { metrics, tail_rule })
    }

    /// Number of explicitly listed metrics (L).
    pub fn explicit_len(&self) -> usize {
        self.metrics.len()
    }

    /// Number of points in the common ground set.
    pub fn point_count(&self) -> usize {
        self.metrics[0].len()
    }

    pub fn tail_rule(&self) -> TailRule {
        self.tail_rule
    }

    /// `d_n(i, j)` for any n >= 1.
    pub fn eval(&self, n: u64, i: usize, j: usize) -> f64 {
        debug_assert!(n >= 1);
        let l = self.metrics.len() as u64;
        if n <= l {
            return self.metrics[(n - 1) as usize][i][j];
        }
        let last = self.metrics[self.metrics.len() - 1][i][j];
        match self.tail_rule {
            TailRule::RepeatLast => last,
            TailRule::Zero => 0.0,
            TailRule::Scale(r) => {
                if last == 0.0 {
                    0.0
                } else {
                    last * r.powf((n - l) as f64)
                }
            }
        }
    }

    /// Partial sum `p_n(i, j) = sum_{t=1}^{2^(n+1)} d_t(i, j)` in closed form.
    pub fn partial_sum(&self, n: u32, i: usize, j: usize) -> f64 {
        let l = self.metrics.len() as f64;
        let count = exp2_f64(n as i64 + 1); // 2^(n+1) as f64, exact for n < 1023
        let explicit_upto = if count >= l { self.metrics.len() } else { count as usize };
        let head: f64 = self.metrics[..explicit_upto]
            .iter()
            .map(|t| t[i][j])
            .sum();
        if count <= l {
            return head;
        }
        let last = self.metrics[self.metrics.len() - 1][i][j];
        let extra = count - l;
        let tail = match self.tail_rule {
            // The zero guard keeps `inf * 0` out when `extra` overflows f64.
            TailRule::RepeatLast => {
                if last == 0.0 {
                    0.0
                } else {
                    extra * last
                }
            }
            TailRule::Zero => 0.0,
            TailRule::Scale(r) => {
                if last == 0.0 {
                    0.0
                } else if r == 1.0 {
                    extra * last
                } else {
                    // last * (r + r^2 + ... + r^extra)
                    let geom = r * (1.0 - r.powf(extra)) / (1.0 - r);
                    last * geom
                }
            }
        };
        head + tail
    }

    pub fn check_point_count(&self, space: &GroundSpace) -> Result<()> {
        if self.point_count() != space.len() {
            return Err(Error::Malformed(format!(
                "metric sequence is over {} points but the space has {}",
                self.point_count(),
                space.len()
            )));
        }
        Ok(())
    }
}

/// `2^k` via exact repeated doubling/halving (no libm rounding).
pub(crate) fn exp2_f64(k: i64) -> f64 {
    let mut v = 1.0f64;
    if k >= 0 {
        for _ in 0..k {
            v *= 2.0;
        }
    } else {
        for _ in 0..(-k) {
            v *= 0.5;
        }
    }
    v
}

/// Combine a sequence into a single ground distance
/// `rho(x, y) = sup_n 2^(-n) * min(1, p_n(x, y))`.
///
/// The sup is a pseudometric bounded by 1/2, and its balls control the
/// partial sums: `rho(x, y) < 2^(-n)` forces `p_n(x, y) < 1`, exactly even in
/// floating point, because a term equal to `2^(-n)` is produced whenever
/// `p_n >= 1`.
pub fn combine_sup(seq: &PseudometricSequence) -> Result<GroundSpace> {
    let n_points = seq.point_count();
    let mut table = vec![vec![0.0f64; n_points]; n_points];
    for i in 0..n_points {
        for j in (i + 1)..n_points {
            let v = sup_value(seq, i, j)?;
            table[i][j] = v;
            table[j][i] = v;
        }
    }
    GroundSpace::from_matrix(table)
}

fn sup_value(seq: &PseudometricSequence, i: usize, j: usize) -> Result<f64> {
    // If every explicit metric vanishes on the pair, every tail does too.
    let all_zero = (1..=seq.explicit_len()).all(|t| seq.eval(t as u64, i, j) == 0.0);
    if all_zero {
        return Ok(0.0);
    }
    let mut best = 0.0f64;
    let mut pow = 0.5f64; // 2^(-n)
    let mut n: u32 = 1;
    loop {
        let p = seq.partial_sum(n, i, j);
        if p.is_nan() {
            return Err(Error::NonFinite(format!("partial sum at n={n}, pair ({i},{j})")));
        }
        let term = pow * p.min(1.0);
        if term > best {
            best = term;
        }
        // Later terms are at most 2^(-n-1); once that cannot beat the best,
        // the sup is final. Some explicit metric is nonzero here, so `best`
        // becomes positive and the loop terminates.
        if pow * 0.5 <= best {
            return Ok(best);
        }
        pow *= 0.5;
        n += 1;
    }
}

/// On-disk JSON representation of a metric sequence.
#[derive(Debug, Serialize, Deserialize)]
pub struct MetricsFile {
    pub tail_rule: TailRule,
    pub metrics: Vec<Vec<Vec<f64>>>,
}

pub fn metrics_from_json(text: &str) -> Result<PseudometricSequence> {
    let file: MetricsFile = serde_json::from_str(text)?;
    PseudometricSequence::new(file.metrics, file.tail_rule)
}

pub fn metrics_to_json(seq: &PseudometricSequence) -> String {
    let file = MetricsFile {
        tail_rule: seq.tail_rule,
        metrics: seq.metrics.clone(),
    };
    serde_json::to_string_pretty(&file).expect("metrics serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Distance tables for the line e=0, a=1, b=2, c=4.
    fn line_table(scale: f64) -> Vec<Vec<f64>> {
        let xs: [f64; 4] = [0.0, 1.0, 2.0, 4.0];
        (0..4)
            .map(|i| (0..4).map(|j| (xs[i] - xs[j]).abs() * scale).collect())
            .collect()
    }

    #[test]
    fn all_zero_metrics_combine_to_zero() {
        let zero = vec![vec![0.0; 3]; 3];
        let seq = PseudometricSequence::new(vec![zero], TailRule::RepeatLast).unwrap();
        let rho = combine_sup(&seq).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(rho.distance(i, j), 0.0);
            }
        }
    }

    #[test]
    fn repeat_last_line_metric_saturates_at_one_half() {
        // p_1(a,b) = 4 * 1 >= 1, so the n=1 term is 1/2 and later terms decay.
        let seq = PseudometricSequence::new(vec![line_table(1.0)], TailRule::RepeatLast).unwrap();
        let rho = combine_sup(&seq).unwrap();
        assert_eq!(rho.distance(1, 2), 0.5);
        assert!(rho.validate().is_valid());
    }

    #[test]
    fn ball_inclusion_holds_exhaustively() {
        let seq = PseudometricSequence::new(
            vec![line_table(0.01), line_table(0.02), line_table(0.005)],
            TailRule::Scale(0.5),
        )
        .unwrap();
        let rho = combine_sup(&seq).unwrap();
        assert!(rho.validate().is_valid());
        for n in 1..=10u32 {
            let bound = exp2_f64(-(n as i64));
            for i in 0..4 {
                for j in 0..4 {
                    if rho.distance(i, j) < bound {
                        assert!(
                            seq.partial_sum(n, i, j) < 1.0,
                            "pair ({i},{j}) inside the 2^-{n} ball but p_{n} >= 1"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn tail_rules_evaluate_past_the_explicit_list() {
        let seq = PseudometricSequence::new(
            vec![line_table(1.0), line_table(2.0)],
            TailRule::Scale(0.5),
        )
        .unwrap();
        assert_eq!(seq.eval(1, 1, 2), 1.0);
        assert_eq!(seq.eval(2, 1, 2), 2.0);
        assert_eq!(seq.eval(3, 1, 2), 1.0); // 2 * 0.5
        assert_eq!(seq.eval(4, 1, 2), 0.5);

        let zero_tail =
            PseudometricSequence::new(vec![line_table(1.0)], TailRule::Zero).unwrap();
        assert_eq!(zero_tail.eval(5, 1, 3), 0.0);
    }

    #[test]
    fn partial_sums_match_direct_summation() {
        let seq = PseudometricSequence::new(
            vec![line_table(0.3), line_table(0.1), line_table(0.2)],
            TailRule::RepeatLast,
        )
        .unwrap();
        for n in 1..=4u32 {
            let direct: f64 = (1..=(1u64 << (n + 1))).map(|t| seq.eval(t, 1, 3)).sum();
            let closed = seq.partial_sum(n, 1, 3);
            assert!((direct - closed).abs() < 1e-9, "n={n}: {direct} vs {closed}");
        }
    }

    #[test]
    fn growing_scale_tails_saturate_without_overflow() {
        let seq = PseudometricSequence::new(
            vec![line_table(0.01)],
            TailRule::Scale(1.5),
        )
        .unwrap();
        let rho = combine_sup(&seq).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let v = rho.distance(i, j);
                assert!(v.is_finite() && v <= 0.5);
            }
        }
    }

    #[test]
    fn sequence_constructor_validates_tables() {
        let bad = vec![vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ]];
        assert!(PseudometricSequence::new(bad, TailRule::RepeatLast).is_err());
        assert!(PseudometricSequence::new(
            vec![vec![vec![0.0]]],
            TailRule::Scale(-1.0)
        )
        .is_err());
    }

    #[test]
    fn metrics_json_round_trip() {
        let seq = PseudometricSequence::new(
            vec![line_table(0.5)],
            TailRule::Scale(0.25),
        )
        .unwrap();
        let text = metrics_to_json(&seq);
        let back = metrics_from_json(&text).unwrap();
        assert_eq!(seq, back);
        let named = r#"{"tail_rule":"repeat-last","metrics":[[[0.0,1.0],[1.0,0.0]]]}"#;
        assert_eq!(
            metrics_from_json(named).unwrap().tail_rule(),
            TailRule::RepeatLast
        );
    }
}
