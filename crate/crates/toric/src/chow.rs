//! Intersection theory of a blowup space: Chow presentation, exact
//! intersection numbers of ray divisors, curve classes of invariant curves,
//! products of divisor classes, and the anticanonical class.
//!
//! Curve classes are stored in the signed convention
//! `β = d·h − Σ aᵅ eᵅ − Σ bᵅ fᵅ`, so pairing a divisor class against a curve
//! class is a plain dot product of coordinate vectors and the coefficient
//! formulas for symmetry actions transcribe directly into matrices.

use crate::blowup::BlowupSpace;
use crate::fan::{Cone, FanError, RayId};
use crate::lattice::{dot, Int};

/// Integer coordinates in the divisor basis {H, E..., F...}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass(pub Vec<Int>);

/// Integer coordinates (d, a..., b...) in the signed curve convention.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveClass(pub Vec<Int>);

/// Intersection pairing of a divisor class with a curve class.
///
/// In the signed convention the basis pairings H·h = 1, E·e = -1, F·f = -1
/// reduce this to the dot product of the coordinate vectors.
pub fn pairing(d: &DivisorClass, c: &CurveClass) -> Int {
    dot(&d.0, &c.0)
}

/// Presentation of the Chow ring: ray-divisor generators modulo
/// Stanley-Reisner monomials and one linear relation per lattice dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowPresentation {
    pub generators: Vec<String>,
    /// Minimal non-faces, as sets of ray labels.
    pub sr_monomials: Vec<Vec<String>>,
    /// Σᵅ ⟨u, vᵅ⟩ Dᵅ for u running over the standard lattice basis;
    /// zero coefficients omitted, ray order preserved.
    pub linear_relations: Vec<Vec<(String, Int)>>,
}

impl BlowupSpace {
    /// The unit class of the `idx`-th basis divisor.
    pub fn basis_divisor(&self, idx: usize) -> DivisorClass {
        let mut v = vec![0; self.basis_dim()];
        v[idx] = 1;
        DivisorClass(v)
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.ledger.basis_names.iter().position(|n| n == name)
    }

    /// Expands a divisor class into ray-divisor coefficients via the
    /// ledger's sections.
    pub fn divisor_to_rays(&self, class: &DivisorClass) -> Vec<Int> {
        let mut out = vec![0; self.fan.rays().len()];
        for (b, &coeff) in class.0.iter().enumerate() {
            if coeff == 0 {
                continue;
            }
            for (o, &s) in out.iter_mut().zip(&self.ledger.sections[b]) {
                *o += coeff * s;
            }
        }
        out
    }

    /// The class of an integer combination of ray divisors.
    pub fn rays_to_class(&self, coeffs: &[Int]) -> DivisorClass {
        let mut out = vec![0; self.basis_dim()];
        for (r, &coeff) in coeffs.iter().enumerate() {
            if coeff == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(&self.ledger.ray_classes[r]) {
                *o += coeff * x;
            }
        }
        DivisorClass(out)
    }

    /// The anticanonical class: the sum of all ray divisor classes.
    pub fn anticanonical(&self) -> DivisorClass {
        DivisorClass(self.sum_of_ray_classes())
    }

    pub fn presentation(&self) -> ChowPresentation {
        let label = |r: RayId| self.fan.rays()[r].label.clone();
        let generators = self.fan.rays().iter().map(|r| r.label.clone()).collect();
        let sr_monomials = self
            .fan
            .minimal_nonfaces()
            .iter()
            .map(|nf| nf.rays().iter().map(|&r| label(r)).collect())
            .collect();
        let linear_relations = (0..self.rank())
            .map(|k| {
                self.fan
                    .rays()
                    .iter()
                    .filter(|ray| ray.vector[k] != 0)
                    .map(|ray| (ray.label.clone(), ray.vector[k]))
                    .collect()
            })
            .collect();
        ChowPresentation { generators, sr_monomials, linear_relations }
    }

    /// Lexicographically least functional u with ⟨u, v_a⟩ = 1 and
    /// ⟨u, v_o⟩ = 0 for the other rays, searched over a small box. The
    /// orthogonality constraints keep the repeated-factor reduction finite;
    /// any valid functional yields the same intersection number.
    fn reduction_functional(&self, a: RayId, others: &[RayId]) -> Vec<Int> {
        const BOX: Int = 3;
        let rank = self.rank();
        let mut u = vec![-BOX; rank];
        loop {
            let ok = dot(&u, self.fan.ray_vector(a)) == 1
                && others.iter().all(|&o| dot(&u, self.fan.ray_vector(o)) == 0);
            if ok {
                return u;
            }
            // lexicographic increment
            let mut i = rank;
            loop {
                assert!(i > 0, "no reduction functional in box for ray {a}");
                i -= 1;
                if u[i] < BOX {
                    u[i] += 1;
                    for x in &mut u[i + 1..] {
                        *x = -BOX;
                    }
                    break;
                }
            }
        }
    }

    /// Exact intersection number of `rank` ray divisors (repeats allowed).
    ///
    /// Distinct rays intersect in 1 when they span a cone and 0 otherwise.
    /// A repeated ray divisor is replaced through its linear equivalence
    /// Dₐ ≡ −Σ_{c≠a} ⟨u, v_c⟩ D_c and the product recursed.
    pub fn intersection_number(&self, rays: &[RayId]) -> Int {
        assert_eq!(rays.len(), self.rank(), "need rank-many ray divisors");
        let mut multiset = rays.to_vec();
        multiset.sort_unstable();

        let support = {
            let mut s = multiset.clone();
            s.dedup();
            s
        };
        if !self.fan.is_cone(&Cone::new(support.clone())) {
            return 0; // Stanley-Reisner relation
        }
        if support.len() == multiset.len() {
            return 1; // distinct rays spanning a maximal cone
        }

        // most repeated ray, ties broken by id
        let repeated = *support
            .iter()
            .max_by_key(|&&r| (multiset.iter().filter(|&&x| x == r).count(), std::cmp::Reverse(r)))
            .unwrap();
        let others: Vec<RayId> = support.iter().copied().filter(|&r| r != repeated).collect();
        let u = self.reduction_functional(repeated, &others);

        let pos = multiset.iter().position(|&r| r == repeated).unwrap();
        let mut total = 0;
        for c in 0..self.fan.rays().len() {
            if c == repeated {
                continue;
            }
            let coeff = dot(&u, self.fan.ray_vector(c));
            if coeff == 0 {
                continue;
            }
            let mut next = multiset.clone();
            next[pos] = c;
            total -= coeff * self.intersection_number(&next);
        }
        total
    }

    /// The curve class of the invariant curve V(wall), read off by pairing
    /// with the basis divisors: the two opposite rays pair to 1, wall rays
    /// pair to their wall-relation coefficient, everything else to 0.
    pub fn wall_curve_class(&self, wall: &Cone) -> Result<CurveClass, FanError> {
        let rel = self.fan.wall_relation(wall)?;
        let coords = self
            .ledger
            .sections
            .iter()
            .map(|section| {
                section
                    .iter()
                    .enumerate()
                    .map(|(r, &coeff)| coeff * rel.get(&r).copied().unwrap_or(0))
                    .sum()
            })
            .collect();
        Ok(CurveClass(coords))
    }

    /// Product of two divisor classes on a threefold, as a curve class.
    pub fn divisor_product(&self, a: &DivisorClass, b: &DivisorClass) -> CurveClass {
        assert_eq!(self.rank(), 3, "divisor products are curves only in rank 3");
        let ar = self.divisor_to_rays(a);
        let br = self.divisor_to_rays(b);
        let coords = self
            .ledger
            .sections
            .iter()
            .map(|section| {
                let mut acc = 0;
                for (r, &x) in ar.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (s, &y) in br.iter().enumerate() {
                        if y == 0 {
                            continue;
                        }
                        for (t, &z) in section.iter().enumerate() {
                            if z == 0 {
                                continue;
                            }
                            acc += x * y * z * self.intersection_number(&[t, r, s]);
                        }
                    }
                }
                acc
            })
            .collect();
        CurveClass(coords)
    }

    /// Intersection number of two divisor classes on a surface.
    pub fn divisor_pair_number(&self, a: &DivisorClass, b: &DivisorClass) -> Int {
        assert_eq!(self.rank(), 2, "pairwise divisor numbers live in rank 2");
        let ar = self.divisor_to_rays(a);
        let br = self.divisor_to_rays(b);
        let mut acc = 0;
        for (r, &x) in ar.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (s, &y) in br.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                acc += x * y * self.intersection_number(&[r, s]);
            }
        }
        acc
    }

    /// Renders a divisor class like `4H - 2E123 - F34`.
    pub fn divisor_string(&self, class: &DivisorClass) -> String {
        render_terms(class.0.iter().copied().zip(self.ledger.basis_names.iter().cloned()))
    }

    /// Renders a curve class like `2h - e123 - f34` from signed coordinates.
    pub fn curve_string(&self, class: &CurveClass) -> String {
        let names = self.ledger.curve_basis_names();
        let terms = class.0.iter().enumerate().map(|(i, &c)| {
            let signed = if i == 0 { c } else { -c };
            (signed, names[i].clone())
        });
        render_terms(terms)
    }
}

fn render_terms(terms: impl Iterator<Item = (Int, String)>) -> String {
    let mut out = String::new();
    for (coeff, name) in terms {
        if coeff == 0 {
            continue;
        }
        if out.is_empty() {
            if coeff < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if coeff < 0 { " - " } else { " + " });
        }
        let mag = coeff.abs();
        if mag != 1 {
            out.push_str(&mag.to_string());
        }
        out.push_str(&name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
