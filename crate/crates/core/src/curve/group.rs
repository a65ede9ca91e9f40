//! Chord-tangent group law, point enumeration and group structure.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::arith::{prime_factors, roots, FieldElement, FiniteField, GaloisField, HomogeneousForm, PolyRing, Ring};

use super::{flexes_over, hessian, CurveError, CurvePoint, PlaneCubic};

/// Largest field size for which points are enumerated.
pub const ENUMERATION_CAP: u128 = 1_000_000;

/// The group law on the points of a smooth cubic over `field` with a chosen origin.
/// Three collinear points sum to `third(O, O)`, which is `O` for a flex origin.
#[derive(Clone, Debug)]
pub struct GroupLaw {
    field: GaloisField,
    form: HomogeneousForm<FieldElement>,
    gradient: [HomogeneousForm<FieldElement>; 3],
    origin: CurvePoint,
}

impl GroupLaw {
    pub fn new(c: &PlaneCubic, field: &GaloisField, origin: CurvePoint) -> Self {
        let form = c.form_over(field);
        assert!(
            field.is_zero(&form.eval(field, &origin.coords)),
            "origin must lie on the curve"
        );
        let gradient = std::array::from_fn(|i| form.partial(field, i));
        GroupLaw {
            field: field.clone(),
            form,
            gradient,
            origin,
        }
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn origin(&self) -> &CurvePoint {
        &self.origin
    }

    pub fn is_identity(&self, p: &CurvePoint) -> bool {
        *p == self.origin
    }

    /// The third intersection of the line through `p` and `q` (the tangent if equal).
    pub fn third(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let f = &self.field;
        let comb = |a: &FieldElement, u: &CurvePoint, b: &FieldElement, v: &[FieldElement; 3]| -> Vec<FieldElement> {
            (0..3)
                .map(|i| f.add(&f.mul(a, &u.coords[i]), &f.mul(b, &v[i])))
                .collect()
        };
        let r = if p != q {
            let b = self.form.binary_restriction(f, &p.coords, &q.coords);
            assert!(!(f.is_zero(&b[1]) && f.is_zero(&b[2])), "line contained in the curve");
            // F(u p + v q) = u v (b1 u + b2 v)
            comb(&b[2], p, &f.neg(&b[1]), &q.coords)
        } else {
            let g: Vec<FieldElement> = self.gradient.iter().map(|d| d.eval(f, &p.coords)).collect();
            let dir = self.tangent_direction(p, &g);
            let b = self.form.binary_restriction(f, &p.coords, &dir);
            // F(u p + v d) = v^2 (b2 u + b3 v)
            comb(&b[3], p, &f.neg(&b[2]), &dir)
        };
        CurvePoint::normalize(f, &r).expect("third point is nonzero")
    }

    /// A point on the tangent line at `p` other than `p`.
    fn tangent_direction(&self, p: &CurvePoint, g: &[FieldElement]) -> [FieldElement; 3] {
        let f = &self.field;
        assert!(g.iter().any(|x| !f.is_zero(x)), "singular point");
        for i in 0..3 {
            let mut e = [f.zero(), f.zero(), f.zero()];
            e[i] = f.one();
            // g x e_i is orthogonal to g
            let cross = [
                f.sub(&f.mul(&g[1], &e[2]), &f.mul(&g[2], &e[1])),
                f.sub(&f.mul(&g[2], &e[0]), &f.mul(&g[0], &e[2])),
                f.sub(&f.mul(&g[0], &e[1]), &f.mul(&g[1], &e[0])),
            ];
            if let Some(n) = CurvePoint::normalize(f, &cross) {
                if n != *p {
                    return n.coords;
                }
            }
        }
        unreachable!("tangent line has a second point")
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        self.third(&self.origin, &self.third(p, q))
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        let oo = self.third(&self.origin, &self.origin);
        self.third(p, &oo)
    }

    pub fn sub(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        self.add(p, &self.neg(q))
    }

    pub fn mul(&self, k: i64, p: &CurvePoint) -> CurvePoint {
        let base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.origin.clone();
        let mut pow = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            e >>= 1;
            if e > 0 {
                pow = self.add(&pow, &pow);
            }
        }
        acc
    }

    /// Order of `p` in a group of order `n`.
    pub fn order(&self, p: &CurvePoint, n: u64) -> u64 {
        let mut ord = n;
        for l in prime_factors(n) {
            while ord.is_multiple_of(l) && self.is_identity(&self.mul((ord / l) as i64, p)) {
                ord /= l;
            }
        }
        ord
    }

    /// Closure of a set of generators under addition, sorted.
    pub fn subgroup_generated(&self, gens: &[CurvePoint]) -> Vec<CurvePoint> {
        let mut set: BTreeSet<CurvePoint> = BTreeSet::new();
        set.insert(self.origin.clone());
        let mut frontier = vec![self.origin.clone()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }
}

/// All points of the curve over `field`, sorted.
pub fn rational_points(c: &PlaneCubic, field: &GaloisField) -> Result<Vec<CurvePoint>, CurveError> {
    let q = field.size().unwrap_or(u128::MAX);
    if q > ENUMERATION_CAP {
        return Err(CurveError::EnumerationTooLarge(q));
    }
    let form = c.form_over(field);
    let pr = PolyRing::new(field);
    let mut pts = BTreeSet::new();
    let elems = field.elements();
    for x in &elems {
        // F(x, y, 1) as a polynomial in y
        let mut coeffs = vec![field.zero(); 4];
        for (m, k) in form.terms() {
            let t = field.mul(k, &field.pow(x, m[0] as u64));
            coeffs[m[1] as usize] = field.add(&coeffs[m[1] as usize], &t);
        }
        let poly = pr.from_coeffs(coeffs);
        let ys = if poly.is_zero() {
            elems.clone()
        } else {
            roots(field, &poly)
        };
        for y in ys {
            pts.insert(CurvePoint::normalize(field, &[x.clone(), y, field.one()]).unwrap());
        }
    }
    let mut inf = vec![field.zero(); 4];
    for (m, k) in form.terms() {
        if m[2] == 0 {
            inf[m[0] as usize] = k.clone();
        }
    }
    let poly = pr.from_coeffs(inf);
    let xs = if poly.is_zero() {
        elems.clone()
    } else {
        roots(field, &poly)
    };
    for x in xs {
        pts.insert(CurvePoint::normalize(field, &[x, field.one(), field.zero()]).unwrap());
    }
    let e0 = [field.one(), field.zero(), field.zero()];
    if field.is_zero(&form.eval(field, &e0)) {
        pts.insert(CurvePoint { coords: e0 });
    }
    Ok(pts.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveGroup {
    pub field_degree: u32,
    pub origin: CurvePoint,
    pub origin_is_flex: bool,
    pub order: u64,
    /// `(a, b)` with `a | b`: the group is `Z/a x Z/b`.
    pub invariants: [u64; 2],
    pub generators: Vec<CurvePoint>,
}

impl CurveGroup {
    /// Nontrivial invariants, e.g. `[6]` or `[6, 6]`.
    pub fn structure(&self) -> Vec<u64> {
        self.invariants.iter().copied().filter(|&d| d > 1).collect()
    }

    pub fn three_torsion_order(&self) -> u64 {
        self.invariants.iter().map(|&d| num_integer::gcd(d, 3)).product()
    }
}

impl std::fmt::Display for CurveGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = self.structure();
        if s.is_empty() {
            write!(f, "0")
        } else {
            let parts: Vec<String> = s.iter().map(|d| format!("Z/{d}")).collect();
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Group structure of the points over `F_{p^k}`. The origin is the smallest
/// rational flex, or the smallest rational point when no flex is rational.
pub fn group_structure(c: &PlaneCubic, k: u32) -> Result<CurveGroup, CurveError> {
    if !super::is_smooth(c).is_smooth() {
        return Err(CurveError::Singular);
    }
    let field = GaloisField::new(c.p(), k)?;
    let pts = rational_points(c, &field)?;
    let h = hessian(c).map(|x| field.embed_prime(x.constant()));
    let flex = pts.iter().find(|pt| field.is_zero(&h.eval(&field, &pt.coords)));
    let origin = flex
        .or(pts.first())
        .cloned()
        .ok_or(CurveError::NoRationalPoint { p: c.p(), k })?;
    let law = GroupLaw::new(c, &field, origin.clone());
    let n = pts.len() as u64;
    let orders: Vec<u64> = pts.iter().map(|pt| law.order(pt, n)).collect();
    let (imax, &b) = orders.iter().enumerate().max_by_key(|(_, &o)| o).unwrap();
    let a = n / b;
    assert!(
        n.is_multiple_of(b) && b % a == 0,
        "group of order {n} with exponent {b}"
    );
    let p1 = pts[imax].clone();
    let mut generators = vec![p1.clone()];
    if a > 1 {
        let mut index: HashMap<CurvePoint, u64> = HashMap::new();
        let mut x = law.origin().clone();
        for i in 0..b {
            index.insert(x.clone(), i);
            x = law.add(&x, &p1);
        }
        let q = pts
            .iter()
            .find_map(|q| {
                let mut y = q.clone();
                for j in 1..=a {
                    if let Some(&m) = index.get(&y) {
                        return (j == a).then_some((q.clone(), m));
                    }
                    y = law.add(&y, q);
                }
                None
            })
            .expect("a complement generator exists");
        let (q, m) = q;
        debug_assert_eq!(m % a, 0);
        generators.push(law.sub(&q, &law.mul((m / a) as i64, &p1)));
    }
    Ok(CurveGroup {
        field_degree: k,
        origin,
        origin_is_flex: flex.is_some(),
        order: n,
        invariants: [a, b],
        generators,
    })
}

/// Points `P` with `3P = O` over `field`, with the smallest flex as origin.
pub fn three_torsion(c: &PlaneCubic, field: &GaloisField) -> Result<Vec<CurvePoint>, CurveError> {
    let flexes = flexes_over(c, field)?;
    let law = GroupLaw::new(c, field, flexes[0].clone());
    Ok(rational_points(c, field)?
        .into_iter()
        .filter(|pt| law.is_identity(&law.mul(3, pt)))
        .collect())
}

/// The subgroup generated by the classes `[P - O]` of the flexes, with the
/// smallest flex `O` as origin; with that origin `[P - O]` is the point `P`.
pub fn flex_difference_subgroup(c: &PlaneCubic, field: &GaloisField) -> Result<Vec<CurvePoint>, CurveError> {
    let flexes = flexes_over(c, field)?;
    let law = GroupLaw::new(c, field, flexes[0].clone());
    Ok(law.subgroup_generated(&flexes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::flexes;
    use proptest::prelude::*;

    fn fermat(p: u64) -> PlaneCubic {
        PlaneCubic::from_int_terms(p, &[([3, 0, 0], 1), ([0, 3, 0], 1), ([0, 0, 3], 1)]).unwrap()
    }

    /// Exhaustive count over all of `P^2(F_q)`.
    fn brute_count(c: &PlaneCubic, field: &GaloisField) -> usize {
        let f = c.form_over(field);
        super::super::projective_points(field, u128::MAX)
            .unwrap()
            .iter()
            .filter(|pt| field.is_zero(&f.eval(field, &pt.coords)))
            .count()
    }

    #[test]
    fn fermat_mod_5_is_cyclic_of_order_6() {
        let c = fermat(5);
        let g = group_structure(&c, 1).unwrap();
        assert_eq!(g.order, 6);
        assert_eq!(g.invariants, [1, 6]);
        assert!(g.origin_is_flex);
        assert_eq!(brute_count(&c, c.field()), 6);
        assert_eq!(g.three_torsion_order(), 3);
    }

    #[test]
    fn fermat_over_f25() {
        let c = fermat(5);
        let g = group_structure(&c, 2).unwrap();
        assert_eq!(g.order, 36);
        assert_eq!(g.invariants, [6, 6]);
        let f25 = GaloisField::new(5, 2).unwrap();
        assert_eq!(brute_count(&c, &f25), 36);
        assert_eq!(three_torsion(&c, &f25).unwrap().len(), 9);
        assert_eq!(
            flex_difference_subgroup(&c, &f25).unwrap(),
            three_torsion(&c, &f25).unwrap()
        );
        // generators have the declared orders and generate everything
        let law = GroupLaw::new(&c, &f25, g.origin.clone());
        assert_eq!(law.order(&g.generators[0], 36), 6);
        assert_eq!(law.order(&g.generators[1], 36), 6);
        assert_eq!(law.subgroup_generated(&g.generators).len(), 36);
    }

    #[test]
    fn weil_bound_and_brute_force_counts() {
        let curves = [
            fermat(7),
            PlaneCubic::from_int_terms(7, &[([0, 2, 1], 1), ([3, 0, 0], -1), ([1, 0, 2], -1), ([0, 0, 3], -1)])
                .unwrap(),
            PlaneCubic::from_int_terms(11, &[([2, 1, 0], 1), ([0, 2, 1], 1), ([1, 0, 2], 1)]).unwrap(),
        ];
        for c in &curves {
            for k in 1..=2 {
                let field = GaloisField::new(c.p(), k).unwrap();
                let n = rational_points(c, &field).unwrap().len();
                assert_eq!(n, brute_count(c, &field));
                let q = field.size().unwrap() as f64;
                assert!((n as f64 - q - 1.0).abs() <= 2.0 * q.sqrt());
            }
        }
    }

    #[test]
    fn single_flex_generates_trivial_subgroup() {
        let c = fermat(5);
        let f25 = GaloisField::new(5, 2).unwrap();
        let fl = flexes_over(&c, &f25).unwrap();
        let law = GroupLaw::new(&c, &f25, fl[0].clone());
        assert_eq!(law.subgroup_generated(&fl[..1]), vec![fl[0].clone()]);
    }

    #[test]
    fn flex_differences_equal_three_torsion_on_more_curves() {
        let curves = [
            fermat(7),
            PlaneCubic::from_int_terms(7, &[([0, 2, 1], 1), ([3, 0, 0], -1), ([1, 0, 2], -1), ([0, 0, 3], -1)])
                .unwrap(),
        ];
        for c in &curves {
            let data = flexes(c).unwrap();
            if data.field.size().unwrap() > 20_000 {
                continue;
            }
            let t = three_torsion(c, &data.field).unwrap();
            assert_eq!(t.len(), 9);
            assert_eq!(flex_difference_subgroup(c, &data.field).unwrap(), t);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn group_axioms_on_fermat_over_f25(i in 0usize..36, j in 0usize..36, k in 0usize..36) {
            let c = fermat(5);
            let f25 = GaloisField::new(5, 2).unwrap();
            let pts = rational_points(&c, &f25).unwrap();
            let law = GroupLaw::new(&c, &f25, flexes_over(&c, &f25).unwrap()[0].clone());
            let (p, q, r) = (&pts[i], &pts[j], &pts[k]);
            prop_assert_eq!(law.add(&law.add(p, q), r), law.add(p, &law.add(q, r)));
            prop_assert_eq!(law.add(p, q), law.add(q, p));
            prop_assert_eq!(law.add(p, law.origin()), p.clone());
            prop_assert!(law.is_identity(&law.add(p, &law.neg(p))));
            // collinear triples sum to the flex origin
            let t = law.third(p, q);
            prop_assert!(law.is_identity(&law.add(&law.add(p, q), &t)));
        }

        #[test]
        fn associativity_with_a_non_flex_origin(i in 0usize..36, j in 0usize..36, k in 0usize..36) {
            let c = fermat(5);
            let f25 = GaloisField::new(5, 2).unwrap();
            let pts = rational_points(&c, &f25).unwrap();
            let h = hessian(&c).map(|x| f25.embed_prime(x.constant()));
            let o = pts.iter().find(|pt| !f25.is_zero(&h.eval(&f25, &pt.coords))).unwrap().clone();
            let law = GroupLaw::new(&c, &f25, o);
            let (p, q, r) = (&pts[i], &pts[j], &pts[k]);
            prop_assert_eq!(law.add(&law.add(p, q), r), law.add(p, &law.add(q, r)));
            prop_assert!(law.is_identity(&law.add(p, &law.neg(p))));
        }
    }
}
