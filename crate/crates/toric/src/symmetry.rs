//! Enumeration of all toric symmetries of a blowup space and their induced
//! actions on divisor and curve classes.
//!
//! A toric symmetry is a lattice automorphism permuting the cones of the
//! fan. Every fan here contains the standard basis vectors among its rays,
//! so a symmetry is determined by where it sends them; that makes the
//! automorphism group finite and exhaustively searchable.

use std::collections::HashMap;

use crate::blowup::BlowupSpace;
use crate::chow::{CurveClass, DivisorClass};
use crate::fan::{Cone, RayId};
use crate::lattice::{solve_integer, Int, IntMat};

/// A lattice automorphism of the fan together with its induced data: the
/// ray permutation and the pushforward matrices on divisor and curve
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricSymmetry {
    pub matrix: IntMat,
    /// `ray_perm[r]` is the image ray of ray `r`.
    pub ray_perm: Vec<RayId>,
    /// Action on divisor-class coordinates; column j is the image of the
    /// j-th basis divisor.
    pub div_push: IntMat,
    /// Action on signed curve-class coordinates.
    pub curve_push: IntMat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetryClassification {
    pub trivial: bool,
    /// Coefficient of H in the image of H.
    pub h_coefficient: Int,
}

/// Wall data shared by all curve pushforwards of one space. The wall list
/// is sorted, so images can be located by binary search.
struct CurvePushContext {
    walls: Vec<Cone>,
    wall_classes: Vec<Vec<Int>>,
    unit_in_walls: Vec<Vec<Int>>,
}

impl BlowupSpace {
    /// The complete, canonically ordered group of toric symmetries.
    ///
    /// Candidates send the standard-basis rays to distinct ray vectors with
    /// determinant ±1; a candidate survives when it permutes the ray set
    /// and the set of maximal cones.
    pub fn find_symmetries(&self) -> Vec<ToricSymmetry> {
        let rank = self.rank();
        let rays = self.fan.rays();
        let n = rays.len();

        let by_vector: HashMap<&[Int], RayId> =
            rays.iter().map(|r| (r.vector.as_slice(), r.id)).collect();

        let mut out = Vec::new();
        enumerate_tuples(n, rank, &mut |image| {
            let cols: Vec<Vec<Int>> =
                image.iter().map(|&r| rays[r].vector.clone()).collect();
            let m = IntMat::from_cols(&cols);
            if m.det().abs() != 1 {
                return;
            }
            let mut perm = vec![0usize; n];
            for r in 0..n {
                let w = m.matvec(&rays[r].vector);
                match by_vector.get(w.as_slice()) {
                    Some(&img) => perm[r] = img,
                    None => return,
                }
            }
            // injective on a finite set of distinct rays, hence a bijection
            for cone in self.fan.maximal_cones() {
                if !self.fan.maximal_cones().contains(&cone.map(&perm)) {
                    return;
                }
            }
            out.push((m, perm));
        });

        let ctx = self.curve_push_context();
        let mut syms: Vec<ToricSymmetry> = out
            .into_iter()
            .map(|(matrix, ray_perm)| {
                let div_push = self.pushforward_divisors(&ray_perm);
                let curve_push = self.pushforward_curves(&ray_perm, &ctx);
                ToricSymmetry { matrix, ray_perm, div_push, curve_push }
            })
            .collect();
        syms.sort_by(|a, b| a.matrix.cmp(&b.matrix));
        syms
    }

    /// Pushforward on divisor classes: each basis divisor is expanded into
    /// ray divisors, the rays are permuted, and the image re-expressed in
    /// the basis.
    fn pushforward_divisors(&self, ray_perm: &[RayId]) -> IntMat {
        let dim = self.basis_dim();
        let cols: Vec<Vec<Int>> = (0..dim)
            .map(|b| {
                let mut permuted = vec![0; self.fan.rays().len()];
                for (r, &coeff) in self.ledger.sections[b].iter().enumerate() {
                    permuted[ray_perm[r]] += coeff;
                }
                self.rays_to_class(&permuted).0
            })
            .collect();
        IntMat::from_cols(&cols)
    }

    /// Per-space data for curve pushforwards: the walls, their curve
    /// classes, and each coordinate unit written as an integer combination
    /// of wall classes.
    fn curve_push_context(&self) -> CurvePushContext {
        let dim = self.basis_dim();
        let walls: Vec<Cone> = self.fan.walls().into_iter().collect();
        let wall_classes: Vec<Vec<Int>> = walls
            .iter()
            .map(|w| self.wall_curve_class(w).expect("wall of a complete fan").0)
            .collect();
        let wall_matrix = IntMat::from_cols(&wall_classes);
        let unit_in_walls = (0..dim)
            .map(|k| {
                let mut unit = vec![0; dim];
                unit[k] = 1;
                solve_integer(&wall_matrix, &unit)
                    .expect("curve basis must be expressible in wall classes")
            })
            .collect();
        CurvePushContext { walls, wall_classes, unit_in_walls }
    }

    /// Pushforward on curve classes: each coordinate unit is written as an
    /// integer combination of wall curve classes, the walls are carried
    /// along the ray permutation, and the images are re-read in curve
    /// coordinates.
    fn pushforward_curves(&self, ray_perm: &[RayId], ctx: &CurvePushContext) -> IntMat {
        let dim = self.basis_dim();
        // a symmetry maps walls to walls of the same fan
        let image_index: Vec<usize> = ctx
            .walls
            .iter()
            .map(|w| {
                let mapped = w.map(ray_perm);
                ctx.walls.binary_search(&mapped).expect("image of a wall is a wall")
            })
            .collect();
        let cols: Vec<Vec<Int>> = ctx
            .unit_in_walls
            .iter()
            .map(|x| {
                let mut img = vec![0; dim];
                for (w, &coeff) in x.iter().enumerate() {
                    if coeff == 0 {
                        continue;
                    }
                    for (i, &c) in ctx.wall_classes[image_index[w]].iter().enumerate() {
                        img[i] += coeff * c;
                    }
                }
                img
            })
            .collect();
        IntMat::from_cols(&cols)
    }

    pub fn apply_to_curve(&self, sym: &ToricSymmetry, beta: &CurveClass) -> CurveClass {
        CurveClass(sym.curve_push.matvec(&beta.0))
    }

    pub fn apply_to_divisor(&self, sym: &ToricSymmetry, class: &DivisorClass) -> DivisorClass {
        DivisorClass(sym.div_push.matvec(&class.0))
    }

    /// Trivial symmetries preserve each of the three ray families; they are
    /// exactly the symmetries fixing the class H. Both criteria are
    /// computed and must agree.
    pub fn classify(&self, sym: &ToricSymmetry) -> SymmetryClassification {
        let families_preserved = self
            .families
            .iter()
            .enumerate()
            .all(|(r, &fam)| self.families[sym.ray_perm[r]] == fam);
        let h_image: Vec<Int> = sym.div_push.col(0);
        let mut h_unit = vec![0; self.basis_dim()];
        h_unit[0] = 1;
        let fixes_h = h_image == h_unit;
        assert_eq!(
            families_preserved, fixes_h,
            "triviality criteria disagree: families {families_preserved}, H {fixes_h}"
        );
        SymmetryClassification { trivial: families_preserved, h_coefficient: h_image[0] }
    }

    /// Composition g∘f of two symmetries of this space.
    pub fn compose(&self, g: &ToricSymmetry, f: &ToricSymmetry) -> ToricSymmetry {
        let ray_perm: Vec<RayId> = f.ray_perm.iter().map(|&r| g.ray_perm[r]).collect();
        ToricSymmetry {
            matrix: g.matrix.matmul(&f.matrix),
            ray_perm,
            div_push: g.div_push.matmul(&f.div_push),
            curve_push: g.curve_push.matmul(&f.curve_push),
        }
    }

    /// Number of nontrivial symmetries up to relabeling: orbits of the
    /// nontrivial set under pre- and post-composition with trivial
    /// symmetries.
    pub fn nontrivial_up_to_relabeling(&self, syms: &[ToricSymmetry]) -> usize {
        let trivial: Vec<&ToricSymmetry> =
            syms.iter().filter(|s| self.classify(s).trivial).collect();
        let nontrivial: Vec<&ToricSymmetry> =
            syms.iter().filter(|s| !self.classify(s).trivial).collect();
        let mut seen: Vec<Vec<RayId>> = Vec::new();
        let mut classes = 0;
        for n in &nontrivial {
            if seen.contains(&n.ray_perm) {
                continue;
            }
            classes += 1;
            for t1 in &trivial {
                for t2 in &trivial {
                    let composed = self.compose(t1, &self.compose(n, t2));
                    if !seen.contains(&composed.ray_perm) {
                        seen.push(composed.ray_perm);
                    }
                }
            }
        }
        classes
    }
}

/// Ordered tuples of `k` distinct elements of `0..n`.
fn enumerate_tuples(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(n: usize, k: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        for i in 0..n {
            if buf.contains(&i) {
                continue;
            }
            buf.push(i);
            go(n, k, buf, f);
            buf.pop();
        }
    }
    go(n, k, &mut Vec::with_capacity(k), f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{build, parse_centers};
    use crate::chow::pairing;

    fn space(centers: &str, rank: usize) -> BlowupSpace {
        build(&parse_centers(centers, rank).unwrap()).unwrap()
    }

    fn find_by_matrix<'a>(syms: &'a [ToricSymmetry], rows: &[[Int; 3]]) -> &'a ToricSymmetry {
        let m = IntMat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
        syms.iter().find(|s| s.matrix == m).expect("expected symmetry matrix present")
    }

    #[test]
    fn p3_has_24_trivial_symmetries() {
        let s = space("", 3);
        let syms = s.find_symmetries();
        assert_eq!(syms.len(), 24);
        assert!(syms.iter().all(|g| s.classify(g).trivial));
        assert!(syms.iter().all(|g| s.classify(g).h_coefficient == 1));
    }

    #[test]
    fn class_a_group() {
        let s = space("p123,l34,l24", 3);
        let syms = s.find_symmetries();
        assert_eq!(syms.len(), 2);
        let tau = find_by_matrix(&syms, &[[0, 1, 0], [1, 0, 0], [1, 1, -1]]);
        let cls = s.classify(tau);
        assert!(!cls.trivial);
        assert_eq!(cls.h_coefficient, 2);
        // involution on curve classes
        assert_eq!(tau.curve_push.matmul(&tau.curve_push), IntMat::identity(4));
    }

    #[test]
    fn class_a_divisor_pushforward() {
        let s = space("p123,l34,l24", 3);
        let syms = s.find_symmetries();
        let tau = find_by_matrix(&syms, &[[0, 1, 0], [1, 0, 0], [1, 1, -1]]);
        // columns in basis order H, E123, F34, F24
        let expect = IntMat::from_cols(&[
            vec![2, -1, -1, -1], // τ*H = 2H - E123 - F34 - F24
            vec![1, 0, -1, -1],  // τ*E123 = H - F34 - F24
            vec![1, -1, 0, -1],  // τ*F34 = H - E123 - F24
            vec![1, -1, -1, 0],  // τ*F24 = H - E123 - F34
        ]);
        assert_eq!(tau.div_push, expect);
    }

    #[test]
    fn class_a_curve_pushforward() {
        let s = space("p123,l34,l24", 3);
        let syms = s.find_symmetries();
        let tau = find_by_matrix(&syms, &[[0, 1, 0], [1, 0, 0], [1, 1, -1]]);
        // signed coordinates (d, a123, b34, b24): the displayed table
        //   τ*h = 2h - e123 - f34 - f24, τ*e123 = h - f34 - f24,
        //   τ*f34 = h - e123 - f24,      τ*f24 = h - e123 - f34
        // becomes the symmetric coefficient matrix below.
        let expect = IntMat::from_rows(&[
            vec![2, -1, -1, -1],
            vec![1, 0, -1, -1],
            vec![1, -1, 0, -1],
            vec![1, -1, -1, 0],
        ]);
        assert_eq!(tau.curve_push, expect);
    }

    #[test]
    fn identity_pushforwards_are_identity() {
        let s = space("p123,l34,l24", 3);
        let syms = s.find_symmetries();
        let id = syms.iter().find(|g| g.matrix == IntMat::identity(3)).unwrap();
        assert_eq!(id.div_push, IntMat::identity(4));
        assert_eq!(id.curve_push, IntMat::identity(4));
        assert!(s.classify(id).trivial);
    }

    #[test]
    fn class_b_pushforwards() {
        let s = space("p123,p124,l23,l34,l14", 3);
        let syms = s.find_symmetries();
        assert_eq!(syms.len(), 2);
        let tau = find_by_matrix(&syms, &[[0, 0, 1], [1, -1, 1], [1, 0, 0]]);
        assert!(!s.classify(tau).trivial);

        // τ*E123 = F14 in basis order H, E123, E124, F23, F34, F14
        let e123 = s.basis_divisor(s.basis_index("E123").unwrap());
        let f14 = s.basis_divisor(s.basis_index("F14").unwrap());
        assert_eq!(s.apply_to_divisor(tau, &e123), f14);

        // τ*e123 = h - e124 - f34 + f14 in signed coordinates
        let mut beta = vec![0; 6];
        beta[s.basis_index("E123").unwrap()] = -1; // e123
        let image = s.apply_to_curve(tau, &CurveClass(beta));
        assert_eq!(s.curve_string(&image), "h - e124 - f34 + f14");
    }

    #[test]
    fn class_c_group_and_sigma_action() {
        let s = space("p124,p123,l34,l23,l14", 3);
        let syms = s.find_symmetries();
        assert_eq!(syms.len(), 6);
        let nontrivial: Vec<&ToricSymmetry> =
            syms.iter().filter(|g| !s.classify(g).trivial).collect();
        assert_eq!(nontrivial.len(), 4);

        let tau = find_by_matrix(&syms, &[[0, 0, -1], [1, 0, -1], [1, -1, 0]]);
        assert!(!s.classify(tau).trivial);
        let sigma = find_by_matrix(&syms, &[[1, -1, 0], [0, -1, 0], [0, 0, -1]]);
        assert!(!s.classify(sigma).trivial);

        // σ*f23 = e124 - f14
        let mut beta = vec![0; 6];
        beta[s.basis_index("F23").unwrap()] = -1; // f23
        let image = s.apply_to_curve(sigma, &CurveClass(beta));
        assert_eq!(s.curve_string(&image), "e124 - f14");

        // up to relabeling the four nontrivial symmetries collapse to one
        assert_eq!(s.nontrivial_up_to_relabeling(&syms), 1);
    }

    #[test]
    fn group_is_closed_and_functorial() {
        let s = space("p124,p123,l34,l23,l14", 3);
        let syms = s.find_symmetries();
        for g in &syms {
            for f in &syms {
                let gf = s.compose(g, f);
                let found = syms.iter().find(|h| h.matrix == gf.matrix).expect("closure");
                assert_eq!(found.ray_perm, gf.ray_perm);
                assert_eq!(found.div_push, gf.div_push, "(g∘f)* = g*∘f* on divisors");
                assert_eq!(found.curve_push, gf.curve_push, "(g∘f)* = g*∘f* on curves");
            }
        }
    }

    #[test]
    fn invariances_hold_on_class_a() {
        let s = space("p123,l34,l24", 3);
        let syms = s.find_symmetries();
        let minus_k = s.anticanonical();
        let dim = s.basis_dim();
        for g in &syms {
            // anticanonical class is preserved
            assert_eq!(s.apply_to_divisor(g, &minus_k), minus_k);
            // pairing invariance: div_pushᵀ · curve_push = identity
            assert_eq!(g.div_push.transpose().matmul(&g.curve_push), IntMat::identity(dim));
            // triple intersection numbers are invariant
            let n = s.fan.rays().len();
            for a in 0..n {
                for b in a..n {
                    for c in b..n {
                        assert_eq!(
                            s.intersection_number(&[a, b, c]),
                            s.intersection_number(&[g.ray_perm[a], g.ray_perm[b], g.ray_perm[c]]),
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_invariance_statement() {
        let s = space("p123,p124,l23,l34,l14", 3);
        let syms = s.find_symmetries();
        for g in &syms {
            for i in 0..s.basis_dim() {
                let d = s.basis_divisor(i);
                for j in 0..s.basis_dim() {
                    let mut c = vec![0; s.basis_dim()];
                    c[j] = if j == 0 { 1 } else { -1 };
                    let beta = CurveClass(c);
                    assert_eq!(
                        pairing(&s.apply_to_divisor(g, &d), &s.apply_to_curve(g, &beta)),
                        pairing(&d, &beta),
                    );
                }
            }
        }
    }

    #[test]
    fn rank2_del_pezzo_symmetries() {
        let s = space("p12,p13,p23", 2);
        let syms = s.find_symmetries();
        assert_eq!(syms.len(), 12);
        let nontrivial = syms.iter().filter(|g| !s.classify(g).trivial).count();
        assert_eq!(nontrivial, 6);
        assert_eq!(s.nontrivial_up_to_relabeling(&syms), 1);
    }
}
