//! Axis-aligned boxes described by their main diagonal, and the two ways of
//! subdividing them.
//!
//! A box is stored as its lower corner `a` and upper corner `b`; the objective
//! is only ever sampled at these two vertices. Both subdivision strategies keep
//! children in the same orientation (lower corner first), so the direction
//! `b - a` of every diagonal has non-negative components.

use crate::error::{Error, Result};

/// Largest dimension accepted by [`partition_2n`], which produces `2^n` children.
pub const MAX_PARTITION_DIM: usize = 10;

/// Euclidean norm of `b - a`.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A hyperinterval `[a, b]` with `a < b` componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl DiagonalBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::CornerLengthMismatch {
                lower: lower.len(),
                upper: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        for (coord, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            for value in [lo, hi] {
                if !value.is_finite() {
                    return Err(Error::NonFiniteCoordinate { coord, value });
                }
            }
            if lo >= hi {
                return Err(Error::DegenerateBox {
                    coord,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same box `[lo, hi]^n` in every coordinate.
    pub fn cube(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::new(vec![lo; n], vec![hi; n])
    }

    /// Lower diagonal vertex `a`.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// Upper diagonal vertex `b`.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Length of the main diagonal.
    pub fn diag_norm(&self) -> f64 {
        distance(&self.lower, &self.upper)
    }

    pub fn edge(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.edge(i)).product()
    }

    /// Index of the longest edge; the smallest index wins ties.
    pub fn longest_edge(&self) -> usize {
        let mut best = 0;
        for i in 1..self.dim() {
            if self.edge(i) > self.edge(best) {
                best = i;
            }
        }
        best
    }

    /// Closed-box membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    fn check_strictly_inside(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        for (coord, (v, (lo, hi))) in x.iter().zip(self.lower.iter().zip(&self.upper)).enumerate() {
            if !(lo < v && v < hi) {
                return Err(Error::NotInterior { coord });
            }
        }
        Ok(())
    }

    /// True when the interiors of the two boxes intersect.
    pub fn overlaps(&self, other: &DiagonalBox) -> bool {
        (0..self.dim()).all(|i| self.lower[i] < other.upper[i] && other.lower[i] < self.upper[i])
    }
}

/// Position along the diagonal `a + s (b - a)` chosen by the placement rule,
/// returned as the parameter `s`.
pub fn diagonal_parameter(bx: &DiagonalBox, f_a: f64, f_b: f64, khat: f64) -> f64 {
    0.5 - (f_b - f_a) / (2.0 * khat * bx.diag_norm())
}

/// Point on the main diagonal where the box is split:
/// `(a + b)/2 - (f_b - f_a)/(2 khat) * (b - a)/|b - a|`.
///
/// Fails when the point would leave the closed segment, which only happens when
/// `khat` is smaller than the slope `|f_b - f_a| / |b - a|`.
pub fn place_on_diagonal(bx: &DiagonalBox, f_a: f64, f_b: f64, khat: f64) -> Result<Vec<f64>> {
    let param = diagonal_parameter(bx, f_a, f_b, khat);
    if !(khat > 0.0) || !(0.0..=1.0).contains(&param) {
        return Err(Error::PlacementOutside { param, khat });
    }
    let norm = bx.diag_norm();
    let shift = (f_b - f_a) / (2.0 * khat);
    Ok(bx
        .lower
        .iter()
        .zip(&bx.upper)
        .map(|(a, b)| 0.5 * (a + b) - shift * (b - a) / norm)
        .collect())
}

/// Which diagonal vertex of a child a value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRef {
    /// The parent's lower vertex `a`, already evaluated.
    ParentLower,
    /// The parent's upper vertex `b`, already evaluated.
    ParentUpper,
    /// Index into [`Subdivision::new_vertices`].
    New(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Child {
    pub bx: DiagonalBox,
    pub lower_vertex: VertexRef,
    pub upper_vertex: VertexRef,
}

/// Result of splitting one box: the children and the vertices that still
/// need an objective evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    pub children: Vec<Child>,
    pub new_vertices: Vec<Vec<f64>>,
}

/// How a selected box is subdivided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Two children, split orthogonally to the longest edge.
    Bisection,
    /// `2^n` children, split by all `n` coordinate hyperplanes through the placed point.
    Partition2n,
}

impl Strategy {
    pub fn subdivide(self, bx: &DiagonalBox, x: &[f64]) -> Result<Subdivision> {
        match self {
            Strategy::Bisection => bisect(bx, x),
            Strategy::Partition2n => partition_2n(bx, x),
        }
    }

    /// Number of subintervals produced by one split in dimension `n`.
    pub fn children_count(self, n: usize) -> usize {
        match self {
            Strategy::Bisection => 2,
            Strategy::Partition2n => 1 << n,
        }
    }

    /// Number of fresh evaluations needed by one split in dimension `n`.
    pub fn new_vertex_count(self, n: usize) -> usize {
        match self {
            Strategy::Bisection => 2,
            Strategy::Partition2n => (2 << n) - 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Bisection => "bisection",
            Strategy::Partition2n => "p2n",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bisection" | "bis" => Ok(Strategy::Bisection),
            "p2n" | "partition2n" | "partition-2n" => Ok(Strategy::Partition2n),
            other => Err(format!("unknown strategy `{other}` (expected bisection or p2n)")),
        }
    }
}

/// Split `bx` by the hyperplane through `x` orthogonal to the longest edge.
///
/// The children are `[a, b']` and `[a', b]`, where `b'` and `a'` agree with `b`
/// and `a` except in the split coordinate; these two are the new vertices.
pub fn bisect(bx: &DiagonalBox, x: &[f64]) -> Result<Subdivision> {
    bx.check_strictly_inside(x)?;
    let j = bx.longest_edge();

    let mut upper_cut = bx.upper.clone();
    upper_cut[j] = x[j];
    let mut lower_cut = bx.lower.clone();
    lower_cut[j] = x[j];

    let first = DiagonalBox {
        lower: bx.lower.clone(),
        upper: upper_cut.clone(),
    };
    let second = DiagonalBox {
        lower: lower_cut.clone(),
        upper: bx.upper.clone(),
    };
    Ok(Subdivision {
        children: vec![
            Child {
                bx: first,
                lower_vertex: VertexRef::ParentLower,
                upper_vertex: VertexRef::New(0),
            },
            Child {
                bx: second,
                lower_vertex: VertexRef::New(1),
                upper_vertex: VertexRef::ParentUpper,
            },
        ],
        new_vertices: vec![upper_cut, lower_cut],
    })
}

/// Split `bx` into `2^n` boxes by the `n` coordinate hyperplanes through `x`.
///
/// Child `δ` (bit `i` of `δ` selects the upper half in coordinate `i`) has
/// lower vertex `a_i | x_i` and upper vertex `x_i | b_i`. The new vertices are
/// `x` followed by the lower and upper vertex of every child other than the
/// two extreme ones, `2^(n+1) - 3` points in all.
pub fn partition_2n(bx: &DiagonalBox, x: &[f64]) -> Result<Subdivision> {
    let n = bx.dim();
    if n > MAX_PARTITION_DIM {
        return Err(Error::DimensionCap {
            n,
            cap: MAX_PARTITION_DIM,
        });
    }
    bx.check_strictly_inside(x)?;

    let full = (1usize << n) - 1;
    let mut new_vertices = Vec::with_capacity((2 << n) - 3);
    new_vertices.push(x.to_vec());
    let mut children = Vec::with_capacity(1 << n);

    for delta in 0..=full {
        let lower: Vec<f64> = (0..n)
            .map(|i| if delta >> i & 1 == 0 { bx.lower[i] } else { x[i] })
            .collect();
        let upper: Vec<f64> = (0..n)
            .map(|i| if delta >> i & 1 == 0 { x[i] } else { bx.upper[i] })
            .collect();

        let (lower_vertex, upper_vertex) = if delta == 0 {
            (VertexRef::ParentLower, VertexRef::New(0))
        } else if delta == full {
            (VertexRef::New(0), VertexRef::ParentUpper)
        } else {
            new_vertices.push(lower.clone());
            new_vertices.push(upper.clone());
            let idx = new_vertices.len();
            (VertexRef::New(idx - 2), VertexRef::New(idx - 1))
        };
        children.push(Child {
            bx: DiagonalBox { lower, upper },
            lower_vertex,
            upper_vertex,
        });
    }
    Ok(Subdivision {
        children,
        new_vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bx(a: &[f64], b: &[f64]) -> DiagonalBox {
        DiagonalBox::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn corners(c: &Child) -> (Vec<f64>, Vec<f64>) {
        (c.bx.lower().to_vec(), c.bx.upper().to_vec())
    }

    #[test]
    fn diag_norm_examples() {
        assert_eq!(bx(&[0.0, 0.0], &[3.0, 4.0]).diag_norm(), 5.0);
        assert_abs_diff_eq!(bx(&[0.0, 0.0], &[1.0, 1.0]).diag_norm(), 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(bx(&[0.0, 0.0, 0.0], &[1.0, 2.0, 2.0]).diag_norm(), 3.0);
    }

    #[test]
    fn degenerate_boxes_rejected() {
        assert!(matches!(
            DiagonalBox::new(vec![0.0, 1.0], vec![1.0, 1.0]),
            Err(Error::DegenerateBox { coord: 1, .. })
        ));
        assert!(DiagonalBox::new(vec![0.0], vec![1.0, 2.0]).is_err());
        assert!(DiagonalBox::new(vec![f64::NAN], vec![1.0]).is_err());
        assert!(DiagonalBox::new(vec![], vec![]).is_err());
    }

    #[test]
    fn placement_symmetric_values_gives_midpoint() {
        let p = place_on_diagonal(&bx(&[0.0, 0.0], &[1.0, 1.0]), 3.0, 3.0, 1.0).unwrap();
        assert_eq!(p, vec![0.5, 0.5]);
    }

    #[test]
    fn placement_hand_values() {
        let p = place_on_diagonal(&bx(&[0.0, 0.0], &[1.0, 1.0]), 0.0, 2.0, 4.0).unwrap();
        let expected = 0.5 - 0.25 / 2f64.sqrt();
        assert_abs_diff_eq!(p[0], expected, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], expected, epsilon = 1e-12);
        assert_abs_diff_eq!(p[0], 0.3232233, epsilon = 1e-7);

        let p = place_on_diagonal(&bx(&[0.0, 0.0], &[4.0, 2.0]), 1.0, 0.0, 2.0).unwrap();
        let root20 = 20f64.sqrt();
        assert_abs_diff_eq!(p[0], 2.0 + 0.25 * 4.0 / root20, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 1.0 + 0.25 * 2.0 / root20, epsilon = 1e-12);
        assert_abs_diff_eq!(p[0], 2.2236068, epsilon = 1e-7);
        assert_abs_diff_eq!(p[1], 1.1118034, epsilon = 1e-7);
    }

    #[test]
    fn placement_with_small_khat_fails() {
        // slope is 10 / sqrt(2); khat = 1 pushes the point past the segment
        let err = place_on_diagonal(&bx(&[0.0, 0.0], &[1.0, 1.0]), 0.0, 10.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::PlacementOutside { .. }));
        assert!(place_on_diagonal(&bx(&[0.0, 0.0], &[1.0, 1.0]), 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn bisect_longest_edge() {
        let s = bisect(&bx(&[0.0, 0.0], &[4.0, 2.0]), &[1.0, 0.5]).unwrap();
        assert_eq!(corners(&s.children[0]), (vec![0.0, 0.0], vec![1.0, 2.0]));
        assert_eq!(corners(&s.children[1]), (vec![1.0, 0.0], vec![4.0, 2.0]));
        assert_eq!(s.new_vertices, vec![vec![1.0, 2.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn bisect_tie_uses_first_coordinate() {
        let s = bisect(&bx(&[0.0, 0.0], &[2.0, 2.0]), &[0.5, 0.5]).unwrap();
        assert_eq!(corners(&s.children[0]), (vec![0.0, 0.0], vec![0.5, 2.0]));
        assert_eq!(corners(&s.children[1]), (vec![0.5, 0.0], vec![2.0, 2.0]));
    }

    #[test]
    fn bisect_third_coordinate() {
        let s = bisect(&bx(&[0.0, 0.0, 0.0], &[1.0, 1.0, 4.0]), &[0.5, 0.5, 2.0]).unwrap();
        assert_eq!(corners(&s.children[0]), (vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 2.0]));
        assert_eq!(corners(&s.children[1]), (vec![0.0, 0.0, 2.0], vec![1.0, 1.0, 4.0]));
    }

    #[test]
    fn split_point_must_be_interior() {
        let b = bx(&[0.0, 0.0], &[1.0, 1.0]);
        assert!(matches!(bisect(&b, &[0.0, 0.5]), Err(Error::NotInterior { coord: 0 })));
        assert!(matches!(partition_2n(&b, &[0.5, 1.0]), Err(Error::NotInterior { coord: 1 })));
        assert!(matches!(bisect(&b, &[0.5]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn partition_2n_hand_example() {
        let s = partition_2n(&bx(&[0.0, 0.0], &[4.0, 2.0]), &[1.0, 0.5]).unwrap();
        let got: Vec<_> = s.children.iter().map(corners).collect();
        assert_eq!(
            got,
            vec![
                (vec![0.0, 0.0], vec![1.0, 0.5]),
                (vec![1.0, 0.0], vec![4.0, 0.5]),
                (vec![0.0, 0.5], vec![1.0, 2.0]),
                (vec![1.0, 0.5], vec![4.0, 2.0]),
            ]
        );
        assert_eq!(
            s.new_vertices,
            vec![
                vec![1.0, 0.5],
                vec![1.0, 0.0],
                vec![4.0, 0.5],
                vec![0.0, 0.5],
                vec![1.0, 2.0]
            ]
        );
    }

    #[test]
    fn partition_2n_counts() {
        let s = partition_2n(&DiagonalBox::cube(0.0, 1.0, 2).unwrap(), &[0.3, 0.3]).unwrap();
        assert_eq!(s.new_vertices.len(), 5);
        let s = partition_2n(&DiagonalBox::cube(0.0, 1.0, 3).unwrap(), &[0.3, 0.3, 0.3]).unwrap();
        assert_eq!(s.new_vertices.len(), 13);
        assert_eq!(s.children.len(), 8);
        assert_eq!(Strategy::Partition2n.new_vertex_count(3), 13);
    }

    #[test]
    fn partition_2n_dimension_cap() {
        let b = DiagonalBox::cube(0.0, 1.0, 11).unwrap();
        assert!(matches!(
            partition_2n(&b, &[0.5; 11]),
            Err(Error::DimensionCap { n: 11, cap: 10 })
        ));
    }

    #[test]
    fn vertex_refs_resolve_to_child_corners() {
        let parent = bx(&[-1.0, 0.0, 2.0], &[1.0, 3.0, 5.0]);
        let x = [0.2, 1.0, 3.5];
        for strategy in [Strategy::Bisection, Strategy::Partition2n] {
            let s = strategy.subdivide(&parent, &x).unwrap();
            let resolve = |r: VertexRef| match r {
                VertexRef::ParentLower => parent.lower().to_vec(),
                VertexRef::ParentUpper => parent.upper().to_vec(),
                VertexRef::New(i) => s.new_vertices[i].clone(),
            };
            for c in &s.children {
                assert_eq!(resolve(c.lower_vertex), c.bx.lower());
                assert_eq!(resolve(c.upper_vertex), c.bx.upper());
            }
        }
    }

    #[test]
    fn strategy_parses() {
        assert_eq!("bisection".parse::<Strategy>().unwrap(), Strategy::Bisection);
        assert_eq!("P2N".parse::<Strategy>().unwrap(), Strategy::Partition2n);
        assert!("trisection".parse::<Strategy>().is_err());
    }
}
