//! Smooth complete simplicial fans in rank 2 or 3, and star subdivision.
//!
//! Cones are stored as sorted sets of ray ids; all geometry is recomputed
//! from the ray vectors on demand. Fans here never exceed 14 rays, so no
//! caching of face structure is attempted.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::lattice::{add, gcd_of, is_primitive, solve_integer, Int, IntMat};

pub type RayId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("invalid center: {0:?} is not a cone of the fan")]
    InvalidCenter(Cone),
    #[error("center must have at least 2 rays")]
    CenterTooSmall,
    #[error("sum of center rays is not primitive")]
    CenterSumNotPrimitive,
    #[error("not a wall: {0:?} is contained in {1} maximal cones")]
    NotAWall(Cone, usize),
    #[error("fan validation failed: {0}")]
    Invalid(String),
}

/// A cone of the fan, identified by its sorted set of ray ids.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone(Vec<RayId>);

impl Cone {
    pub fn new(mut rays: Vec<RayId>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Cone(rays)
    }

    pub fn rays(&self) -> &[RayId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, r: RayId) -> bool {
        self.0.binary_search(&r).is_ok()
    }

    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.0.iter().all(|&r| other.contains(r))
    }

    /// Image of this cone under a ray permutation.
    pub fn map(&self, perm: &[RayId]) -> Cone {
        Cone::new(self.0.iter().map(|&r| perm[r]).collect())
    }
}

impl std::fmt::Debug for Cone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "⟨{:?}⟩", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub id: RayId,
    pub vector: Vec<Int>,
    pub label: String,
}

/// A smooth complete simplicial fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Ray>,
    maximal_cones: BTreeSet<Cone>,
}

/// The fan of projective 3-space: four rays, four maximal cones.
pub fn p3_fan() -> Fan {
    Fan::from_parts(
        3,
        vec![vec![-1, -1, -1], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
    )
}

/// The fan of the projective plane: three rays, three maximal cones.
pub fn p2_fan() -> Fan {
    Fan::from_parts(
        2,
        vec![vec![-1, -1], vec![1, 0], vec![0, 1]],
        vec![vec![0, 1], vec![0, 2], vec![1, 2]],
    )
}

impl Fan {
    fn from_parts(rank: usize, vectors: Vec<Vec<Int>>, cones: Vec<Vec<RayId>>) -> Fan {
        let rays = vectors
            .into_iter()
            .enumerate()
            .map(|(id, vector)| Ray { id, vector, label: format!("v{}", id + 1) })
            .collect();
        let fan = Fan {
            rank,
            rays,
            maximal_cones: cones.into_iter().map(Cone::new).collect(),
        };
        debug_assert!(fan.validate().is_ok());
        fan
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ray_vector(&self, r: RayId) -> &[Int] {
        &self.rays[r].vector
    }

    pub fn maximal_cones(&self) -> &BTreeSet<Cone> {
        &self.maximal_cones
    }

    pub fn ray_by_label(&self, label: &str) -> Option<RayId> {
        self.rays.iter().find(|r| r.label == label).map(|r| r.id)
    }

    pub fn ray_by_vector(&self, v: &[Int]) -> Option<RayId> {
        self.rays.iter().find(|r| r.vector == v).map(|r| r.id)
    }

    /// Whether a set of rays spans a cone of the fan.
    ///
    /// For a simplicial fan the faces of a cone are exactly the subsets of
    /// its rays, so this is a subset test against the maximal cones.
    pub fn is_cone(&self, c: &Cone) -> bool {
        c.len() <= self.rank && self.maximal_cones.iter().any(|m| c.is_subset_of(m))
    }

    /// All k-dimensional cones of the fan.
    pub fn faces(&self, k: usize) -> BTreeSet<Cone> {
        assert!(k <= self.rank, "face dimension exceeds fan rank");
        let mut out = BTreeSet::new();
        for m in &self.maximal_cones {
            subsets_of_size(m.rays(), k, &mut |s| {
                out.insert(Cone::new(s.to_vec()));
            });
        }
        out
    }

    /// The walls: codimension-1 cones.
    pub fn walls(&self) -> BTreeSet<Cone> {
        self.faces(self.rank - 1)
    }

    /// The two maximal cones containing a wall.
    pub fn wall_neighbors(&self, wall: &Cone) -> Result<(Cone, Cone), FanError> {
        let mut found: Vec<&Cone> = self
            .maximal_cones
            .iter()
            .filter(|m| wall.is_subset_of(m))
            .collect();
        if found.len() != 2 {
            return Err(FanError::NotAWall(wall.clone(), found.len()));
        }
        let b = found.pop().unwrap().clone();
        let a = found.pop().unwrap().clone();
        Ok((a, b))
    }

    /// The unique integer relation carried by a wall, as coefficients on rays
    /// summing to zero: `v' + v'' + Σ cᵢ wᵢ = 0`, where `v'`, `v''` are the
    /// opposite rays of the two maximal cones containing the wall (their
    /// coefficients are 1 by smoothness) and the `wᵢ` are the wall rays.
    pub fn wall_relation(&self, wall: &Cone) -> Result<BTreeMap<RayId, Int>, FanError> {
        let (ca, cb) = self.wall_neighbors(wall)?;
        let opp_a = *ca.rays().iter().find(|r| !wall.contains(**r)).unwrap();
        let opp_b = *cb.rays().iter().find(|r| !wall.contains(**r)).unwrap();

        // v' + v'' = Σ aᵢ wᵢ has a unique integer solution in a smooth fan.
        let rhs = add(self.ray_vector(opp_a), self.ray_vector(opp_b));
        let cols: Vec<Vec<Int>> = wall.rays().iter().map(|&r| self.ray_vector(r).to_vec()).collect();
        let a = solve_integer(&IntMat::from_cols(&cols), &rhs)
            .expect("smooth wall relation must have an integer solution");

        let mut rel = BTreeMap::new();
        rel.insert(opp_a, 1);
        rel.insert(opp_b, 1);
        for (&r, &coeff) in wall.rays().iter().zip(&a) {
            rel.insert(r, -coeff);
        }
        debug_assert!({
            let mut sum = vec![0; self.rank];
            for (&r, &c) in &rel {
                for (s, &x) in sum.iter_mut().zip(self.ray_vector(r)) {
                    *s += c * x;
                }
            }
            sum.iter().all(|&x| x == 0)
        });
        Ok(rel)
    }

    /// All inclusion-minimal sets of rays that span no cone of the fan.
    ///
    /// A minimal non-face has every proper subset a face, so its size is at
    /// most rank + 1; sizes 0 and 1 are always faces.
    pub fn minimal_nonfaces(&self) -> BTreeSet<Cone> {
        let ids: Vec<RayId> = (0..self.rays.len()).collect();
        let mut nonfaces: BTreeSet<Cone> = BTreeSet::new();
        for k in 2..=(self.rank + 1) {
            subsets_of_size(&ids, k, &mut |s| {
                let c = Cone::new(s.to_vec());
                if !self.is_cone(&c) {
                    let minimal = !nonfaces.iter().any(|nf| nf.is_subset_of(&c));
                    if minimal {
                        nonfaces.insert(c);
                    }
                }
            });
        }
        nonfaces
    }

    /// Star subdivision along `center`: inserts the ray generated by the sum
    /// of the center's rays and re-triangulates every maximal cone containing
    /// the center. Returns the subdivided fan and the new ray's id.
    pub fn star_subdivide(&self, center: &Cone) -> Result<(Fan, RayId), FanError> {
        if center.len() < 2 {
            return Err(FanError::CenterTooSmall);
        }
        if !self.is_cone(center) {
            return Err(FanError::InvalidCenter(center.clone()));
        }

        let mut w = vec![0; self.rank];
        for &r in center.rays() {
            w = add(&w, self.ray_vector(r));
        }
        if !is_primitive(&w) {
            // cannot happen for a cone of a smooth fan
            return Err(FanError::CenterSumNotPrimitive);
        }

        let mut rays = self.rays.clone();
        let new_id = rays.len();
        let label = format!(
            "v{}",
            center
                .rays()
                .iter()
                .map(|&r| self.rays[r].label.trim_start_matches('v'))
                .collect::<String>()
        );
        rays.push(Ray { id: new_id, vector: w, label });

        let mut cones = BTreeSet::new();
        for m in &self.maximal_cones {
            if center.is_subset_of(m) {
                for &drop in center.rays() {
                    let replaced: Vec<RayId> = m
                        .rays()
                        .iter()
                        .copied()
                        .filter(|&r| r != drop)
                        .chain(std::iter::once(new_id))
                        .collect();
                    cones.insert(Cone::new(replaced));
                }
            } else {
                cones.insert(m.clone());
            }
        }

        let fan = Fan { rank: self.rank, rays, maximal_cones: cones };
        debug_assert!(fan.validate().is_ok(), "subdivision must preserve validity");
        Ok((fan, new_id))
    }

    /// Checks that the fan is simplicial, smooth and complete, with primitive
    /// pairwise-distinct rays and unique labels.
    pub fn validate(&self) -> Result<(), FanError> {
        let n = self.rays.len();
        for (i, ray) in self.rays.iter().enumerate() {
            if ray.id != i {
                return Err(FanError::Invalid(format!("ray id {} out of order", ray.id)));
            }
            if ray.vector.len() != self.rank {
                return Err(FanError::Invalid(format!("ray {} has wrong dimension", ray.label)));
            }
            if !is_primitive(&ray.vector) {
                return Err(FanError::Invalid(format!(
                    "ray {} is not primitive (gcd {})",
                    ray.label,
                    gcd_of(&ray.vector)
                )));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.rays[i].vector == self.rays[j].vector {
                    return Err(FanError::Invalid(format!(
                        "duplicate ray vector at {} and {}",
                        self.rays[i].label, self.rays[j].label
                    )));
                }
                if self.rays[i].label == self.rays[j].label {
                    return Err(FanError::Invalid(format!(
                        "duplicate ray label {}",
                        self.rays[i].label
                    )));
                }
            }
        }

        for m in &self.maximal_cones {
            if m.len() != self.rank {
                return Err(FanError::Invalid(format!("non-simplicial maximal cone {m:?}")));
            }
            if m.rays().iter().any(|&r| r >= n) {
                return Err(FanError::Invalid(format!("cone {m:?} references unknown ray")));
            }
            let cols: Vec<Vec<Int>> =
                m.rays().iter().map(|&r| self.ray_vector(r).to_vec()).collect();
            let det = IntMat::from_cols(&cols).det();
            if det.abs() != 1 {
                return Err(FanError::Invalid(format!(
                    "maximal cone {m:?} is not unimodular (det {det})"
                )));
            }
        }

        // completeness: every wall lies in exactly two maximal cones
        for wall in self.walls() {
            let count = self
                .maximal_cones
                .iter()
                .filter(|m| wall.is_subset_of(m))
                .count();
            if count != 2 {
                return Err(FanError::Invalid(format!(
                    "wall {wall:?} lies in {count} maximal cones"
                )));
            }
        }
        Ok(())
    }
}

fn subsets_of_size(items: &[RayId], k: usize, f: &mut impl FnMut(&[RayId])) {
    fn go(items: &[RayId], k: usize, start: usize, cur: &mut Vec<RayId>, f: &mut impl FnMut(&[RayId])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::new(), f);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone_by_labels(fan: &Fan, labels: &[&str]) -> Cone {
        Cone::new(labels.iter().map(|l| fan.ray_by_label(l).unwrap()).collect())
    }

    /// Builds the blowup of P^3 at p123, l34, l24 directly through the fan
    /// layer. Basis for many golden tests below.
    fn class_a_fan() -> Fan {
        let fan = p3_fan();
        let (fan, _) = fan.star_subdivide(&cone_by_labels(&fan, &["v1", "v2", "v3"])).unwrap();
        let (fan, _) = fan.star_subdivide(&cone_by_labels(&fan, &["v3", "v4"])).unwrap();
        let (fan, _) = fan.star_subdivide(&cone_by_labels(&fan, &["v2", "v4"])).unwrap();
        fan
    }

    #[test]
    fn p3_fan_shape() {
        let fan = p3_fan();
        let vectors: BTreeSet<Vec<Int>> = fan.rays().iter().map(|r| r.vector.clone()).collect();
        let expected: BTreeSet<Vec<Int>> =
            [vec![-1, -1, -1], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]].into_iter().collect();
        assert_eq!(vectors, expected);
        assert_eq!(fan.maximal_cones().len(), 4);
        fan.validate().unwrap();
    }

    #[test]
    fn p2_fan_shape() {
        let fan = p2_fan();
        assert_eq!(fan.rays().len(), 3);
        assert_eq!(fan.maximal_cones().len(), 3);
        fan.validate().unwrap();
    }

    #[test]
    fn p3_faces() {
        let fan = p3_fan();
        assert_eq!(fan.faces(2).len(), 6);
        assert_eq!(fan.faces(1).len(), 4);
    }

    /// Independent face oracle: pairwise intersections of maximal cones,
    /// filtered by cardinality.
    fn faces_by_intersection(fan: &Fan, k: usize) -> BTreeSet<Cone> {
        let cones: Vec<&Cone> = fan.maximal_cones().iter().collect();
        let mut out = BTreeSet::new();
        for (i, a) in cones.iter().enumerate() {
            for b in &cones[i + 1..] {
                let inter: Vec<RayId> =
                    a.rays().iter().copied().filter(|&r| b.contains(r)).collect();
                if inter.len() == k {
                    out.insert(Cone::new(inter));
                }
            }
        }
        out
    }

    #[test]
    fn class_a_walls() {
        let fan = class_a_fan();
        assert_eq!(fan.maximal_cones().len(), 10);
        let walls = fan.faces(2);
        let oracle = faces_by_intersection(&fan, 2);
        assert_eq!(walls, oracle);
        // Euler relation for the induced sphere triangulation:
        // rays - walls + maximal cones = 2, so 10 cones and 7 rays force 15.
        assert_eq!(walls.len(), 15);
    }

    #[test]
    fn subdivide_point_center_in_p3() {
        let fan = p3_fan();
        let center = cone_by_labels(&fan, &["v1", "v2", "v3"]);
        let (sub, new_ray) = fan.star_subdivide(&center).unwrap();
        assert_eq!(sub.ray_vector(new_ray), &[0, 0, -1]);
        assert_eq!(sub.rays()[new_ray].label, "v123");
        let expect: BTreeSet<Cone> = [
            cone_by_labels(&sub, &["v1", "v2", "v123"]),
            cone_by_labels(&sub, &["v1", "v3", "v123"]),
            cone_by_labels(&sub, &["v2", "v3", "v123"]),
            cone_by_labels(&sub, &["v1", "v2", "v4"]),
            cone_by_labels(&sub, &["v1", "v3", "v4"]),
            cone_by_labels(&sub, &["v2", "v3", "v4"]),
        ]
        .into_iter()
        .collect();
        assert_eq!(sub.maximal_cones(), &expect);
    }

    #[test]
    fn subdivide_line_center_splits_both_neighbors() {
        let fan = p3_fan();
        let (fan, _) = fan.star_subdivide(&cone_by_labels(&fan, &["v1", "v2", "v3"])).unwrap();
        let center = cone_by_labels(&fan, &["v3", "v4"]);
        let (sub, new_ray) = fan.star_subdivide(&center).unwrap();
        assert_eq!(sub.ray_vector(new_ray), &[0, 1, 1]);
        assert_eq!(sub.rays()[new_ray].label, "v34");
        let expect: BTreeSet<Cone> = [
            cone_by_labels(&sub, &["v1", "v2", "v123"]),
            cone_by_labels(&sub, &["v1", "v3", "v123"]),
            cone_by_labels(&sub, &["v2", "v3", "v123"]),
            cone_by_labels(&sub, &["v1", "v2", "v4"]),
            cone_by_labels(&sub, &["v1", "v3", "v34"]),
            cone_by_labels(&sub, &["v1", "v4", "v34"]),
            cone_by_labels(&sub, &["v2", "v3", "v34"]),
            cone_by_labels(&sub, &["v2", "v4", "v34"]),
        ]
        .into_iter()
        .collect();
        assert_eq!(sub.maximal_cones(), &expect);
    }

    #[test]
    fn subdivide_p2_point() {
        let fan = p2_fan();
        let center = cone_by_labels(&fan, &["v2", "v3"]);
        let (sub, new_ray) = fan.star_subdivide(&center).unwrap();
        assert_eq!(sub.ray_vector(new_ray), &[1, 1]);
        assert_eq!(sub.rays().len(), 4);
        assert_eq!(sub.maximal_cones().len(), 4);
    }

    #[test]
    fn subdivide_rejects_non_cone() {
        let fan = class_a_fan();
        // v3, v4 no longer span a cone once l34 is blown up
        let center = cone_by_labels(&fan, &["v3", "v4"]);
        assert!(matches!(fan.star_subdivide(&center), Err(FanError::InvalidCenter(_))));
    }

    #[test]
    fn cone_counts_under_subdivision() {
        // rank 3: subdividing a 3-cone or a 2-cone both add 2 maximal cones
        let fan = p3_fan();
        let (fan, _) = fan.star_subdivide(&cone_by_labels(&fan, &["v1", "v2", "v3"])).unwrap();
        assert_eq!(fan.maximal_cones().len(), 6);
        let (fan, _) = fan.star_subdivide(&cone_by_labels(&fan, &["v3", "v4"])).unwrap();
        assert_eq!(fan.maximal_cones().len(), 8);
        let (fan, _) = fan.star_subdivide(&cone_by_labels(&fan, &["v2", "v4"])).unwrap();
        assert_eq!(fan.maximal_cones().len(), 10);
        assert_eq!(fan.rays().len(), 7);
    }

    #[test]
    fn p3_minimal_nonfaces() {
        let fan = p3_fan();
        let expect: BTreeSet<Cone> = [Cone::new(vec![0, 1, 2, 3])].into_iter().collect();
        assert_eq!(fan.minimal_nonfaces(), expect);
    }

    #[test]
    fn p2_minimal_nonfaces() {
        let fan = p2_fan();
        let expect: BTreeSet<Cone> = [Cone::new(vec![0, 1, 2])].into_iter().collect();
        assert_eq!(fan.minimal_nonfaces(), expect);
    }

    #[test]
    fn class_a_minimal_nonfaces() {
        let fan = class_a_fan();
        let by_labels = |sets: &[&[&str]]| -> BTreeSet<Cone> {
            sets.iter().map(|s| cone_by_labels(&fan, s)).collect()
        };
        let expect = by_labels(&[
            &["v2", "v4"],
            &["v3", "v4"],
            &["v3", "v24"],
            &["v4", "v123"],
            &["v123", "v34"],
            &["v123", "v24"],
            &["v1", "v2", "v3"],
            &["v1", "v2", "v34"],
            &["v1", "v34", "v24"],
        ]);
        assert_eq!(fan.minimal_nonfaces(), expect);
    }

    #[test]
    fn wall_relation_p3() {
        let fan = p3_fan();
        let wall = cone_by_labels(&fan, &["v2", "v3"]);
        let rel = fan.wall_relation(&wall).unwrap();
        // v1 + v4 = -v2 - v3, i.e. all four coefficients are 1 in zero-sum form
        let expect: BTreeMap<RayId, Int> = [(0, 1), (1, 1), (2, 1), (3, 1)].into_iter().collect();
        assert_eq!(rel, expect);
    }

    #[test]
    fn wall_relation_exceptional_curve_on_surface() {
        let fan = p2_fan();
        let (fan, e) = fan.star_subdivide(&cone_by_labels(&fan, &["v2", "v3"])).unwrap();
        let rel = fan.wall_relation(&Cone::new(vec![e])).unwrap();
        // (1,0) + (0,1) = 1·(1,1): self-intersection coefficient -1
        assert_eq!(rel[&e], -1);
        assert_eq!(rel[&fan.ray_by_label("v2").unwrap()], 1);
        assert_eq!(rel[&fan.ray_by_label("v3").unwrap()], 1);
    }

    #[test]
    fn wall_relation_class_a_solves_exactly() {
        let fan = class_a_fan();
        for wall in fan.walls() {
            let rel = fan.wall_relation(&wall).unwrap();
            let mut sum = vec![0; fan.rank()];
            for (&r, &c) in &rel {
                for (s, &x) in sum.iter_mut().zip(fan.ray_vector(r)) {
                    *s += c * x;
                }
            }
            assert_eq!(sum, vec![0; fan.rank()], "relation fails on wall {wall:?}");
        }
        // the specific wall ⟨v3, v34⟩: v1 + v2 + v34 = 0 with v3 coefficient 0
        let wall = cone_by_labels(&fan, &["v3", "v34"]);
        let rel = fan.wall_relation(&wall).unwrap();
        assert_eq!(rel[&fan.ray_by_label("v1").unwrap()], 1);
        assert_eq!(rel[&fan.ray_by_label("v2").unwrap()], 1);
        assert_eq!(rel[&fan.ray_by_label("v3").unwrap()], 0);
        assert_eq!(rel[&fan.ray_by_label("v34").unwrap()], 1);
    }

    #[test]
    fn wall_relation_rejects_non_wall() {
        let fan = p3_fan();
        let not_wall = Cone::new(vec![0]);
        assert!(matches!(fan.wall_relation(&not_wall), Err(FanError::NotAWall(_, _))));
    }
}
