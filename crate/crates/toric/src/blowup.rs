//! Iterated blowups of P^3 (or P^2) along torus-invariant centers, with the
//! ledger identifying each ray divisor in the geometric basis {H, E, F}.
//!
//! A configuration is an unordered set of fixed points followed by an
//! ordered list of invariant lines; points are blown up first. Line centers
//! always refer to cones on original rays (proper transforms), so blowups
//! with centers inside the exceptional locus are unrepresentable by
//! construction.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::fan::{p2_fan, p3_fan, Cone, Fan, FanError, RayId};
use crate::lattice::Int;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlowupError {
    #[error("malformed center token `{0}`")]
    Malformed(String),
    #[error("center index out of range in `{0}`")]
    OutOfRange(String),
    #[error("duplicate center `{0}`")]
    Duplicate(String),
    #[error("ordering violation: point centers must precede line centers")]
    OrderingViolation,
    #[error("line centers are only valid in rank 3")]
    LineInRank2,
    #[error(transparent)]
    Fan(#[from] FanError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CenterKind {
    Point,
    Line,
}

/// A torus-invariant blowup center, named by the original rays of its cone.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlowupCenter {
    pub kind: CenterKind,
    /// Sorted 1-based ray indices: three for a point in rank 3, two for a
    /// line in rank 3 or a point in rank 2.
    pub indices: Vec<u8>,
}

impl BlowupCenter {
    pub fn point(indices: &[u8]) -> Self {
        let mut indices = indices.to_vec();
        indices.sort_unstable();
        BlowupCenter { kind: CenterKind::Point, indices }
    }

    pub fn line(indices: &[u8]) -> Self {
        let mut indices = indices.to_vec();
        indices.sort_unstable();
        BlowupCenter { kind: CenterKind::Line, indices }
    }

    pub fn token(&self) -> String {
        let tag = match self.kind {
            CenterKind::Point => 'p',
            CenterKind::Line => 'l',
        };
        let digits: String = self.indices.iter().map(u8::to_string).collect();
        format!("{tag}{digits}")
    }

    /// Relabels the center by a permutation of the original ray indices
    /// (1-based, `perm[i-1]` is the image of `i`).
    pub fn relabel(&self, perm: &[u8]) -> Self {
        let mut indices: Vec<u8> = self.indices.iter().map(|&i| perm[i as usize - 1]).collect();
        indices.sort_unstable();
        BlowupCenter { kind: self.kind, indices }
    }
}

/// An ordered blowup configuration: a set of points, then a list of lines.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlowupConfig {
    pub rank: usize,
    pub points: BTreeSet<BlowupCenter>,
    pub lines: Vec<BlowupCenter>,
}

impl BlowupConfig {
    pub fn new(rank: usize, points: Vec<BlowupCenter>, lines: Vec<BlowupCenter>) -> Result<Self, BlowupError> {
        let mut point_set = BTreeSet::new();
        for p in points {
            validate_center(&p, rank)?;
            if !point_set.insert(p.clone()) {
                return Err(BlowupError::Duplicate(p.token()));
            }
        }
        let mut seen = BTreeSet::new();
        for l in &lines {
            validate_center(l, rank)?;
            if !seen.insert(l.clone()) {
                return Err(BlowupError::Duplicate(l.token()));
            }
        }
        Ok(BlowupConfig { rank, points: point_set, lines })
    }

    pub fn empty(rank: usize) -> Self {
        BlowupConfig { rank, points: BTreeSet::new(), lines: Vec::new() }
    }

    pub fn n_centers(&self) -> usize {
        self.points.len() + self.lines.len()
    }

    /// The centers in construction order: points in index order, then lines.
    pub fn ordered_centers(&self) -> Vec<BlowupCenter> {
        self.points.iter().cloned().chain(self.lines.iter().cloned()).collect()
    }

    /// Image of the configuration under a relabeling of the original rays.
    /// Point sets are compared as sets, line lists position by position.
    pub fn relabel(&self, perm: &[u8]) -> Self {
        BlowupConfig {
            rank: self.rank,
            points: self.points.iter().map(|p| p.relabel(perm)).collect(),
            lines: self.lines.iter().map(|l| l.relabel(perm)).collect(),
        }
    }

    pub fn to_token_string(&self) -> String {
        let tokens: Vec<String> = self.ordered_centers().iter().map(BlowupCenter::token).collect();
        tokens.join(",")
    }
}

fn validate_center(c: &BlowupCenter, rank: usize) -> Result<(), BlowupError> {
    let max = rank as u8 + 1;
    let expected_len = match (rank, c.kind) {
        (3, CenterKind::Point) => 3,
        (3, CenterKind::Line) => 2,
        (2, CenterKind::Point) => 2,
        (2, CenterKind::Line) => return Err(BlowupError::LineInRank2),
        _ => return Err(BlowupError::Malformed(c.token())),
    };
    if c.indices.len() != expected_len {
        return Err(BlowupError::Malformed(c.token()));
    }
    if c.indices.iter().any(|&i| i < 1 || i > max) {
        return Err(BlowupError::OutOfRange(c.token()));
    }
    if c.indices.windows(2).any(|w| w[0] == w[1]) {
        return Err(BlowupError::Malformed(c.token()));
    }
    Ok(())
}

/// Parses a comma-separated center list: `p<ijk>` and `l<ij>` in rank 3,
/// `p<ij>` in rank 2. Point tokens may appear in any order but must all
/// precede line tokens. The empty string is the empty configuration.
pub fn parse_centers(text: &str, rank: usize) -> Result<BlowupConfig, BlowupError> {
    assert!(rank == 2 || rank == 3, "rank must be 2 or 3");
    let mut points = Vec::new();
    let mut lines = Vec::new();
    for raw in text.split(',') {
        let tok = raw.trim();
        if tok.is_empty() {
            if text.trim().is_empty() {
                continue;
            }
            return Err(BlowupError::Malformed(raw.to_string()));
        }
        let (kind, digits) = match tok.split_at(1) {
            ("p", rest) => (CenterKind::Point, rest),
            ("l", rest) => (CenterKind::Line, rest),
            _ => return Err(BlowupError::Malformed(tok.to_string())),
        };
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(BlowupError::Malformed(tok.to_string()));
        }
        let mut indices: Vec<u8> = digits.bytes().map(|b| b - b'0').collect();
        indices.sort_unstable();
        let center = BlowupCenter { kind, indices };
        validate_center(&center, rank)?;
        match kind {
            CenterKind::Point => {
                if !lines.is_empty() {
                    return Err(BlowupError::OrderingViolation);
                }
                points.push(center);
            }
            CenterKind::Line => lines.push(center),
        }
    }
    BlowupConfig::new(rank, points, lines)
}

/// Family of a ray divisor: pullback hyperplane, point-exceptional, or
/// line-exceptional. Nontrivial symmetries mix these families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayFamily {
    Original,
    PointExceptional,
    LineExceptional,
}

/// The divisor-class ledger in the basis {H, E_point..., F_line...}.
///
/// `ray_classes[r]` is the class of the ray divisor `D_r`; `sections[b]`
/// writes basis element `b` as an integer combination of ray divisors.
/// Both are maintained incrementally through the blowup sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLedger {
    pub basis_names: Vec<String>,
    pub ray_classes: Vec<Vec<Int>>,
    pub sections: Vec<Vec<Int>>,
}

impl ClassLedger {
    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    /// Lowercase names for the dual curve basis: h, e..., f....
    pub fn curve_basis_names(&self) -> Vec<String> {
        self.basis_names.iter().map(|n| n.to_lowercase()).collect()
    }
}

/// A blowup space: the fan, its construction history, and the class ledger.
#[derive(Clone, Debug)]
pub struct BlowupSpace {
    pub config: BlowupConfig,
    pub fan: Fan,
    pub ledger: ClassLedger,
    pub history: Vec<(BlowupCenter, RayId)>,
    pub families: Vec<RayFamily>,
}

/// Builds the blowup space for a configuration by sequential star
/// subdivision. Point centers are processed in index order (the resulting
/// fan does not depend on point order), then lines in the given order.
///
/// Divisor classes transform by the proper-transform rule: subdividing a
/// cone with new class X gives the new ray class X and decrements the class
/// of every ray of the subdivided cone by X.
pub fn build(config: &BlowupConfig) -> Result<BlowupSpace, BlowupError> {
    let base = match config.rank {
        3 => p3_fan(),
        2 => p2_fan(),
        r => panic!("unsupported rank {r}"),
    };
    let n_original = base.rays().len();

    let mut fan = base;
    let mut history = Vec::new();
    let mut families = vec![RayFamily::Original; n_original];

    // basis slot 0 is H; ray divisors of the base fan are all H
    let mut basis_names = vec!["H".to_string()];
    let mut ray_classes: Vec<Vec<Int>> = vec![vec![1]; n_original];
    // H = [D_1] initially; corrections accumulate as centers contain ray v1
    let mut sections: Vec<Vec<Int>> = vec![{
        let mut s = vec![0; n_original];
        s[0] = 1;
        s
    }];

    for center in config.ordered_centers() {
        let cone = Cone::new(center.indices.iter().map(|&i| i as usize - 1).collect());
        let (next, new_ray) = fan.star_subdivide(&cone).map_err(|e| match e {
            FanError::InvalidCenter(_) => BlowupError::Duplicate(center.token()),
            other => BlowupError::Fan(other),
        })?;
        fan = next;

        let (family, prefix) = match center.kind {
            CenterKind::Point => (RayFamily::PointExceptional, 'E'),
            CenterKind::Line => (RayFamily::LineExceptional, 'F'),
        };
        families.push(family);
        let digits: String = center.indices.iter().map(u8::to_string).collect();
        basis_names.push(format!("{prefix}{digits}"));
        let slot = basis_names.len() - 1;

        // extend every existing class vector by the new basis slot
        for c in ray_classes.iter_mut() {
            c.push(0);
        }
        // new exceptional class on the new ray, decrement on the center rays
        let mut new_class = vec![0; basis_names.len()];
        new_class[slot] = 1;
        ray_classes.push(new_class);
        for &r in cone.rays() {
            ray_classes[r][slot] -= 1;
        }

        // keep sections valid: old [D_r] = new [D_r] + [D_new] for r in cone
        for s in sections.iter_mut() {
            let correction: Int = cone.rays().iter().map(|&r| s[r]).sum();
            s.push(correction);
        }
        let mut new_section = vec![0; fan.rays().len()];
        new_section[new_ray] = 1;
        sections.push(new_section);

        history.push((center, new_ray));
    }

    let ledger = ClassLedger { basis_names, ray_classes, sections };
    let space = BlowupSpace { config: config.clone(), fan, ledger, history, families };
    debug_assert!(space.check_ledger());
    Ok(space)
}

impl BlowupSpace {
    pub fn rank(&self) -> usize {
        self.fan.rank()
    }

    pub fn basis_dim(&self) -> usize {
        self.ledger.dim()
    }

    /// Sum of all ray divisor classes.
    pub fn sum_of_ray_classes(&self) -> Vec<Int> {
        let mut sum = vec![0; self.ledger.dim()];
        for c in &self.ledger.ray_classes {
            for (s, &x) in sum.iter_mut().zip(c) {
                *s += x;
            }
        }
        sum
    }

    /// Verifies that each section really expands its basis element.
    fn check_ledger(&self) -> bool {
        let dim = self.ledger.dim();
        for (b, section) in self.ledger.sections.iter().enumerate() {
            let mut acc = vec![0; dim];
            for (r, &coeff) in section.iter().enumerate() {
                for (a, &x) in acc.iter_mut().zip(&self.ledger.ray_classes[r]) {
                    *a += coeff * x;
                }
            }
            let mut unit = vec![0; dim];
            unit[b] = 1;
            if acc != unit {
                return false;
            }
        }
        true
    }
}
