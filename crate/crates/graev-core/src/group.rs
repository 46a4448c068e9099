//! The abstract free Boolean group over a ground space.
//!
//! Elements are finite subsets of the non-distinguished points, stored as
//! strictly increasing index lists; addition is symmetric difference, so every
//! element is its own inverse. `e` (index 0) is the group zero and never
//! appears in a support.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{GroundSpace, E_INDEX};

/// A group element, canonically represented by its sorted support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    support: Vec<usize>,
}

impl GroupElement {
    /// The group zero (empty support), identified with `e`.
    pub fn zero() -> Self {
        GroupElement::default()
    }

    /// Build from an explicit support. Rejects unsorted or duplicated indices
    /// and any occurrence of index 0.
    pub fn from_support(support: Vec<usize>) -> Result<Self> {
        for w in support.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Malformed(format!(
                    "support must be strictly increasing, found {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if support.first() == Some(&E_INDEX) {
            return Err(Error::Malformed(
                "the distinguished point e (index 0) cannot appear in a support".into(),
            ));
        }
        Ok(GroupElement { support })
    }

    pub(crate) fn from_sorted_unchecked(support: Vec<usize>) -> Self {
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(support.first() != Some(&E_INDEX));
        GroupElement { support }
    }

    /// Symmetric-difference sum of arbitrary points: repeated indices cancel
    /// pairwise and index 0 contributes nothing.
    pub fn sum_points(points: &[usize], space: &GroundSpace) -> Result<Self> {
        for &p in points {
            space.check_index(p)?;
        }
        let mut sorted: Vec<usize> = points.iter().copied().filter(|&p| p != E_INDEX).collect();
        sorted.sort_unstable();
        let mut support = Vec::with_capacity(sorted.len());
        let mut iter = sorted.into_iter().peekable();
        while let Some(p) = iter.next() {
            if iter.peek() == Some(&p) {
                iter.next(); // an even occurrence cancels
            } else {
                support.push(p);
            }
        }
        // Runs of odd length leave one copy; runs of even length vanish. The
        // pairwise cancellation above handles both because the list is sorted.
        Ok(GroupElement { support })
    }

    /// Group addition: symmetric difference of supports.
    pub fn add(&self, other: &GroupElement) -> GroupElement {
        let (a, b) = (&self.support, &other.support);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        GroupElement { support: out }
    }

    pub fn word_length(&self) -> usize {
        self.support.len()
    }

    /// Membership in the filtration level `B_n`: at most `n` letters.
    pub fn in_bn(&self, n: usize) -> bool {
        self.support.len() <= n
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn check_in_space(&self, space: &GroundSpace) -> Result<()> {
        if let Some(&max) = self.support.last() {
            space.check_index(max)?;
        }
        Ok(())
    }

    /// Parse a comma-separated index list; repeated indices cancel, 0 is
    /// absorbed, and the empty string is the zero element.
    pub fn parse_points(text: &str, space: &GroundSpace) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(GroupElement::zero());
        }
        let mut points = Vec::new();
        for part in trimmed.split(',') {
            let idx: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("bad point index {part:?}")))?;
            points.push(idx);
        }
        GroupElement::sum_points(&points, space)
    }
}

/// An ordered list of point pairs whose symmetric-difference sum is a group
/// element; `e` may appear and pairs may repeat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Representation {
    pub pairs: Vec<(usize, usize)>,
}

impl Representation {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Representation { pairs }
    }

    /// The represented element and the total pair weight `sum rho(x_i, y_i)`.
    pub fn evaluate(&self, space: &GroundSpace) -> Result<(GroupElement, f64)> {
        let mut points = Vec::with_capacity(self.pairs.len() * 2);
        let mut weight = 0.0;
        for &(x, y) in &self.pairs {
            space.check_index(x)?;
            space.check_index(y)?;
            points.push(x);
            points.push(y);
            weight += space.distance(x, y);
        }
        Ok((GroupElement::sum_points(&points, space)?, weight))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_space() -> GroundSpace {
        GroundSpace::from_points(vec![vec![0.0], vec![1.0], vec![2.0], vec![4.0]]).unwrap()
    }

    fn el(support: &[usize]) -> GroupElement {
        GroupElement::from_support(support.to_vec()).unwrap()
    }

    #[test]
    fn add_is_symmetric_difference() {
        assert_eq!(el(&[1, 2]).add(&el(&[2, 3])), el(&[1, 3]));
        assert_eq!(el(&[1, 2]).add(&el(&[1, 2])), GroupElement::zero());
        assert_eq!(GroupElement::zero().add(&GroupElement::zero()), GroupElement::zero());
        assert_eq!(el(&[1]).add(&GroupElement::zero()), el(&[1]));
    }

    #[test]
    fn word_length_and_filtration() {
        assert_eq!(GroupElement::zero().word_length(), 0);
        assert!(GroupElement::zero().in_bn(0));
        let g = el(&[1, 2, 3]);
        assert_eq!(g.word_length(), 3);
        assert!(g.in_bn(3) && g.in_bn(5) && !g.in_bn(2));
        assert_eq!(el(&[1, 2]).add(&el(&[2])).word_length(), 1);
    }

    #[test]
    fn sum_points_cancels_and_absorbs_e() {
        let s = line_space();
        assert_eq!(GroupElement::sum_points(&[1, 2, 1], &s).unwrap(), el(&[2]));
        assert_eq!(
            GroupElement::sum_points(&[0, 0], &s).unwrap(),
            GroupElement::zero()
        );
        assert_eq!(
            GroupElement::sum_points(&[1, 2, 3], &s).unwrap(),
            el(&[1, 2, 3])
        );
        assert!(GroupElement::sum_points(&[9], &s).is_err());
    }

    #[test]
    fn from_support_rejects_bad_input() {
        assert!(GroupElement::from_support(vec![2, 1]).is_err());
        assert!(GroupElement::from_support(vec![1, 1]).is_err());
        assert!(GroupElement::from_support(vec![0, 1]).is_err());
    }

    #[test]
    fn evaluate_representation() {
        let s = line_space();
        // (a,b),(a,c): element {b,c}, weight |1-2| + |1-4| = 4
        let rep = Representation::new(vec![(1, 2), (1, 3)]);
        let (g, w) = rep.evaluate(&s).unwrap();
        assert_eq!(g, el(&[2, 3]));
        assert_eq!(w, 4.0);

        let (z, wz) = Representation::new(vec![(1, 1)]).evaluate(&s).unwrap();
        assert!(z.is_zero());
        assert_eq!(wz, 0.0);

        let (a, wa) = Representation::new(vec![(1, 0)]).evaluate(&s).unwrap();
        assert_eq!(a, el(&[1]));
        assert_eq!(wa, 1.0);
    }

    #[test]
    fn evaluated_element_ignores_pair_order() {
        let s = line_space();
        let rep1 = Representation::new(vec![(1, 2), (0, 3), (2, 2)]);
        let rep2 = Representation::new(vec![(2, 2), (1, 2), (0, 3)]);
        assert_eq!(
            rep1.evaluate(&s).unwrap().0,
            rep2.evaluate(&s).unwrap().0
        );
    }

    #[test]
    fn parse_points() {
        let s = line_space();
        assert_eq!(GroupElement::parse_points("1,2,3", &s).unwrap(), el(&[1, 2, 3]));
        assert_eq!(GroupElement::parse_points("", &s).unwrap(), GroupElement::zero());
        assert_eq!(GroupElement::parse_points("2,1,2", &s).unwrap(), el(&[1]));
        assert!(GroupElement::parse_points("x", &s).is_err());
    }
}
