//! Truncated Peter-Weyl basis, Haar weights, and multiplication operators.
//!
//! Operators are represented in the orthonormalized basis
//! e^_{l i j} = t^l_{i j} / sqrt(w^l_i), where the Haar weights
//! w^l_i = q^{-2i} / [2l+1]_q make left multiplication a *-representation:
//! the matrix adjoint of lmult(x) is lmult(x*) wherever truncation does not
//! interfere. The weight normalization is pinned by the modular property of
//! the Haar state and validated in the test suites, not assumed.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::collections::HashMap;

use super::cg::{pw_product, q_number, CgCache};
use super::half::HalfInt;
use crate::opcore::ComplexMatrix;

/// Index (l, i, j) into the Peter-Weyl basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PeterWeylIndex {
    pub l: HalfInt,
    pub i: HalfInt,
    pub j: HalfInt,
}

impl PeterWeylIndex {
    pub fn new(l: HalfInt, i: HalfInt, j: HalfInt) -> crate::error::Result<Self> {
        let valid = l >= HalfInt::ZERO
            && i.abs() <= l
            && j.abs() <= l
            && (l - i).is_integer()
            && (l - j).is_integer();
        if !valid {
            return Err(crate::error::Error::Parameter(format!(
                "invalid Peter-Weyl index (l={l}, i={i}, j={j})"
            )));
        }
        Ok(PeterWeylIndex { l, i, j })
    }
}

/// Enumeration of all (l, i, j) with l <= l_max.
#[derive(Debug, Clone)]
pub struct PwBasis {
    pub l_max: HalfInt,
    items: Vec<PeterWeylIndex>,
    lookup: HashMap<(i32, i32, i32), usize>,
}

impl PwBasis {
    pub fn new(l_max: HalfInt) -> PwBasis {
        let mut items = Vec::new();
        let mut lookup = HashMap::new();
        for l in HalfInt::ZERO.ladder_to(l_max) {
            for i in l.projections() {
                for j in l.projections() {
                    lookup.insert((l.doubled(), i.doubled(), j.doubled()), items.len());
                    items.push(PeterWeylIndex { l, i, j });
                }
            }
        }
        PwBasis { l_max, items, lookup }
    }

    pub fn dim(&self) -> usize {
        self.items.len()
    }

    pub fn index(&self, idx: PeterWeylIndex) -> Option<usize> {
        self.lookup
            .get(&(idx.l.doubled(), idx.i.doubled(), idx.j.doubled()))
            .copied()
    }

    pub fn items(&self) -> &[PeterWeylIndex] {
        &self.items
    }

    /// Positions with l <= l_max - margin.
    pub fn interior(&self, margin: HalfInt) -> Vec<usize> {
        self.items
            .iter()
            .enumerate()
            .filter(|(_, idx)| idx.l <= self.l_max - margin)
            .map(|(k, _)| k)
            .collect()
    }
}

/// Haar weight w^l_i = q^{-2i} / [2l+1]_q.
pub fn haar_weight(l: HalfInt, i: HalfInt, q: f64) -> f64 {
    q.powf(-2.0 * i.as_f64()) / q_number(l + l + HalfInt::ONE, q)
}

/// Algebra element as a real linear combination of Peter-Weyl elements.
///
/// Everything in this module stays real: the coupling coefficients are real
/// and the star operation only introduces signed powers of q.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PwElement {
    pub terms: Vec<(PeterWeylIndex, f64)>,
}

impl PwElement {
    pub fn unit() -> PwElement {
        PwElement {
            terms: vec![(
                PeterWeylIndex { l: HalfInt::ZERO, i: HalfInt::ZERO, j: HalfInt::ZERO },
                1.0,
            )],
        }
    }

    pub fn basis(idx: PeterWeylIndex) -> PwElement {
        PwElement { terms: vec![(idx, 1.0)] }
    }

    pub fn scale(&self, s: f64) -> PwElement {
        PwElement { terms: self.terms.iter().map(|&(i, c)| (i, c * s)).collect() }
    }

    pub fn add(&self, other: &PwElement) -> PwElement {
        let mut acc: HashMap<(i32, i32, i32), f64> = HashMap::new();
        for &(idx, c) in self.terms.iter().chain(other.terms.iter()) {
            *acc.entry((idx.l.doubled(), idx.i.doubled(), idx.j.doubled())).or_insert(0.0) += c;
        }
        PwElement::from_map(acc)
    }

    pub fn sub(&self, other: &PwElement) -> PwElement {
        self.add(&other.scale(-1.0))
    }

    fn from_map(map: HashMap<(i32, i32, i32), f64>) -> PwElement {
        let mut terms: Vec<(PeterWeylIndex, f64)> = map
            .into_iter()
            .filter(|&(_, c)| c.abs() > 1e-14)
            .map(|((l, i, j), c)| {
                (
                    PeterWeylIndex {
                        l: HalfInt::from_doubled(l),
                        i: HalfInt::from_doubled(i),
                        j: HalfInt::from_doubled(j),
                    },
                    c,
                )
            })
            .collect();
        terms.sort_by_key(|(idx, _)| (idx.l.doubled(), idx.i.doubled(), idx.j.doubled()));
        PwElement { terms }
    }

    /// Abstract product through the Peter-Weyl product rule (no truncation).
    pub fn product(&self, other: &PwElement, cache: &mut CgCache) -> PwElement {
        let mut acc: HashMap<(i32, i32, i32), f64> = HashMap::new();
        for &(a, ca) in &self.terms {
            for &(b, cb) in &other.terms {
                for (l, coeff) in pw_product(cache, a.l, a.i, a.j, b.l, b.i, b.j) {
                    let key = (l.doubled(), (a.i + b.i).doubled(), (a.j + b.j).doubled());
                    *acc.entry(key).or_insert(0.0) += ca * cb * coeff;
                }
            }
        }
        PwElement::from_map(acc)
    }

    /// Star: (t^l_{ij})* = (-q)^{j-i} t^l_{-i,-j}, extended antilinearly
    /// (real coefficients, so linearly).
    pub fn star(&self, q: f64) -> PwElement {
        let mut acc: HashMap<(i32, i32, i32), f64> = HashMap::new();
        for &(idx, c) in &self.terms {
            let power = (idx.j - idx.i).as_f64();
            debug_assert!((idx.j - idx.i).is_integer());
            let sign = if (idx.j - idx.i).doubled() % 4 == 0 { 1.0 } else { -1.0 };
            let coeff = c * sign * q.powf(power);
            let key = ((idx.l).doubled(), (-idx.i).doubled(), (-idx.j).doubled());
            *acc.entry(key).or_insert(0.0) += coeff;
        }
        PwElement::from_map(acc)
    }

    /// Left Hopf action of K^n: scales t^l_{ij} by q^{n j}.
    pub fn k_left(&self, n: i32, q: f64) -> PwElement {
        PwElement {
            terms: self
                .terms
                .iter()
                .map(|&(idx, c)| (idx, c * q.powf(n as f64 * idx.j.as_f64())))
                .collect(),
        }
    }

    /// Coefficient of the unit t^0_{00}; this is the Haar state on elements.
    pub fn unit_coefficient(&self) -> f64 {
        self.terms
            .iter()
            .find(|(idx, _)| idx.l == HalfInt::ZERO)
            .map(|&(_, c)| c)
            .unwrap_or(0.0)
    }

    /// E-action: partial_E t^l_{ij} = kappa^l_{j+1} t^l_{i,j+1}, dropping the
    /// annihilated top rung.
    pub fn raise_e(&self, q: f64) -> PwElement {
        let mut acc: HashMap<(i32, i32, i32), f64> = HashMap::new();
        for &(idx, c) in &self.terms {
            if idx.j >= idx.l {
                continue;
            }
            let coeff = kappa_coeff(idx.l, idx.j + HalfInt::ONE, q);
            let key = (idx.l.doubled(), idx.i.doubled(), (idx.j + HalfInt::ONE).doubled());
            *acc.entry(key).or_insert(0.0) += c * coeff;
        }
        PwElement::from_map(acc)
    }

    /// F-action: partial_F t^l_{ij} = kappa^l_j t^l_{i,j-1}.
    pub fn lower_f(&self, q: f64) -> PwElement {
        let mut acc: HashMap<(i32, i32, i32), f64> = HashMap::new();
        for &(idx, c) in &self.terms {
            if idx.j <= -idx.l {
                continue;
            }
            let coeff = kappa_coeff(idx.l, idx.j, q);
            let key = (idx.l.doubled(), idx.i.doubled(), (idx.j - HalfInt::ONE).doubled());
            *acc.entry(key).or_insert(0.0) += c * coeff;
        }
        PwElement::from_map(acc)
    }
}

/// kappa^l_k = sqrt([l+1/2]^2 - [k-1/2]^2), the ladder coefficient of the
/// Dirac operator. The same q-number formula is applied verbatim to
/// half-integer arguments.
pub fn kappa_coeff(l: HalfInt, k: HalfInt, q: f64) -> f64 {
    let a = q_number(l + HalfInt::HALF, q);
    let b = q_number(k - HalfInt::HALF, q);
    (a * a - b * b).sqrt()
}

pub fn kappa_radicand(l: HalfInt, k: HalfInt, q: f64) -> f64 {
    let a = q_number(l + HalfInt::HALF, q);
    let b = q_number(k - HalfInt::HALF, q);
    a * a - b * b
}

/// The four generators as Peter-Weyl elements of the fundamental block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuqGenerator {
    A,
    B,
    C,
    D,
}

impl SuqGenerator {
    pub fn element(self) -> PwElement {
        let (i, j) = match self {
            SuqGenerator::A => (-1, -1),
            SuqGenerator::B => (-1, 1),
            SuqGenerator::C => (1, -1),
            SuqGenerator::D => (1, 1),
        };
        PwElement::basis(PeterWeylIndex {
            l: HalfInt::HALF,
            i: HalfInt::from_doubled(i),
            j: HalfInt::from_doubled(j),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            SuqGenerator::A => "a",
            SuqGenerator::B => "b",
            SuqGenerator::C => "c",
            SuqGenerator::D => "d",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Matrix of multiplication by an element in the orthonormalized truncated
/// basis; overflow past l_max is dropped.
pub fn mult_matrix(
    elem: &PwElement,
    side: Side,
    basis: &PwBasis,
    q: f64,
    cache: &mut CgCache,
) -> ComplexMatrix {
    let dim = basis.dim();
    let mut mat = Array2::zeros((dim, dim));
    for (col, &src) in basis.items().iter().enumerate() {
        let w_src = haar_weight(src.l, src.i, q);
        for &(x, cx) in &elem.terms {
            let expansion = match side {
                Side::Left => pw_product(cache, x.l, x.i, x.j, src.l, src.i, src.j),
                Side::Right => pw_product(cache, src.l, src.i, src.j, x.l, x.i, x.j),
            };
            let (ti, tj) = (src.i + x.i, src.j + x.j);
            for (l, coeff) in expansion {
                let target = PeterWeylIndex { l, i: ti, j: tj };
                if let Some(row) = basis.index(target) {
                    let w_tgt = haar_weight(l, ti, q);
                    mat[[row, col]] += C64::new(cx * coeff * (w_tgt / w_src).sqrt(), 0.0);
                }
            }
        }
    }
    ComplexMatrix::new(mat).expect("multiplication matrix")
}

/// Apply an element-level map to the orthonormal basis columns: the matrix
/// of x |-> map(x) in the truncated orthonormalized basis.
pub fn operator_matrix(
    basis: &PwBasis,
    q: f64,
    mut map: impl FnMut(&PwElement) -> PwElement,
) -> ComplexMatrix {
    let dim = basis.dim();
    let mut mat = Array2::zeros((dim, dim));
    for (col, &src) in basis.items().iter().enumerate() {
        let w_src = haar_weight(src.l, src.i, q);
        let image = map(&PwElement::basis(src));
        for &(idx, c) in &image.terms {
            if let Some(row) = basis.index(idx) {
                let w_tgt = haar_weight(idx.l, idx.i, q);
                mat[[row, col]] += C64::new(c * (w_tgt / w_src).sqrt(), 0.0);
            }
        }
    }
    ComplexMatrix::new(mat).expect("operator matrix")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(d: i32) -> HalfInt {
        HalfInt::from_doubled(d)
    }

    #[test]
    fn basis_enumeration() {
        let basis = PwBasis::new(h(6)); // l_max = 3
        // sum over 2l = 0..6 of (2l+1)^2
        assert_eq!(basis.dim(), 1 + 4 + 9 + 16 + 25 + 36 + 49);
        let interior = basis.interior(HalfInt::ONE);
        assert_eq!(interior.len(), 1 + 4 + 9 + 16 + 25);
    }

    #[test]
    fn star_matches_generator_adjoints() {
        let q = 0.5;
        // a* = d, b* = -q c, c* = -q^{-1} b, d* = a
        let star = |g: SuqGenerator| g.element().star(q);
        assert_eq!(star(SuqGenerator::A), SuqGenerator::D.element());
        assert_eq!(star(SuqGenerator::D), SuqGenerator::A.element());
        let bs = star(SuqGenerator::B);
        assert_eq!(bs.terms.len(), 1);
        assert_eq!(bs.terms[0].0, SuqGenerator::C.element().terms[0].0);
        assert!((bs.terms[0].1 + q).abs() < 1e-15);
        let cs = star(SuqGenerator::C);
        assert!((cs.terms[0].1 + 1.0 / q).abs() < 1e-15);
    }

    #[test]
    fn star_is_involutive_and_antimultiplicative() {
        let q = 0.5;
        let mut cache = CgCache::new(q);
        for g in [SuqGenerator::A, SuqGenerator::B, SuqGenerator::C, SuqGenerator::D] {
            let e = g.element();
            assert_eq!(e.star(q).star(q), e);
        }
        // (xy)* = y* x* on a sample product
        let x = SuqGenerator::A.element();
        let y = SuqGenerator::B.element();
        let lhs = x.product(&y, &mut cache).star(q);
        let rhs = y.star(q).product(&x.star(q), &mut cache);
        let diff = lhs.sub(&rhs);
        assert!(
            diff.terms.iter().all(|&(_, c)| c.abs() < 1e-12),
            "star antimultiplicativity violated: {diff:?}"
        );
    }

    #[test]
    fn haar_weight_normalization() {
        let q = 0.5;
        // phi(a* a) = q^2/(1+q^2) equals the weight at (1/2, -1/2).
        let mut cache = CgCache::new(q);
        let a = SuqGenerator::A.element();
        let asa = a.star(q).product(&a, &mut cache);
        let direct = asa.unit_coefficient();
        let weight = haar_weight(h(1), h(-1), q);
        assert!((direct - weight).abs() < 1e-13, "{direct} vs {weight}");
        assert!((direct - q * q / (1.0 + q * q)).abs() < 1e-13);

        // phi(c* c) is positive and below one
        let c = SuqGenerator::C.element();
        let csc = c.star(q).product(&c, &mut cache);
        let val = csc.unit_coefficient();
        assert!(val > 0.0 && val < 1.0);
    }

    #[test]
    fn lmult_adjoint_is_lmult_of_star_on_interior() {
        // In the orthonormalized basis, lmult(x)^H agrees with lmult(x*) on
        // the interior block; this pins both the star formula and the Haar
        // weights at once.
        for &q in &[0.5, 0.8] {
            let basis = PwBasis::new(h(5));
            let mut cache = CgCache::new(q);
            for g in [SuqGenerator::A, SuqGenerator::B, SuqGenerator::C, SuqGenerator::D] {
                let m = mult_matrix(&g.element(), Side::Left, &basis, q, &mut cache);
                let mstar = mult_matrix(&g.element().star(q), Side::Left, &basis, q, &mut cache);
                let interior = basis.interior(HalfInt::HALF);
                let diff = m.adjoint().sub(&mstar).compress(&interior);
                assert!(diff.frobenius_norm() < 1e-12, "q={q} {:?}", g.name());
            }
        }
    }

    #[test]
    fn defining_relations_hold_as_operators_on_interior() {
        for &q in &[0.5, 0.8] {
            let basis = PwBasis::new(h(6));
            let mut cache = CgCache::new(q);
            let m = |g: SuqGenerator, cache: &mut CgCache| {
                mult_matrix(&g.element(), Side::Left, &basis, q, cache)
            };
            let a = m(SuqGenerator::A, &mut cache);
            let b = m(SuqGenerator::B, &mut cache);
            let c = m(SuqGenerator::C, &mut cache);
            let d = m(SuqGenerator::D, &mut cache);
            let interior = basis.interior(HalfInt::ONE);
            let check = |lhs: ComplexMatrix, rhs: ComplexMatrix, label: &str| {
                let res = lhs.sub(&rhs).select_columns(&interior).frobenius_norm();
                assert!(res < 1e-9, "relation {label} residual {res} at q={q}");
            };
            let qc = C64::new(q, 0.0);
            check(a.mul(&b), b.mul(&a).scale(qc), "ab=qba");
            check(a.mul(&c), c.mul(&a).scale(qc), "ac=qca");
            check(b.mul(&d), d.mul(&b).scale(qc), "bd=qdb");
            check(c.mul(&d), d.mul(&c).scale(qc), "cd=qdc");
            check(b.mul(&c), c.mul(&b), "bc=cb");
            let id = ComplexMatrix::identity(basis.dim());
            check(a.mul(&d), id.add(&b.mul(&c).scale(qc)), "ad=1+qbc");
            check(
                d.mul(&a),
                id.add(&b.mul(&c).scale(C64::new(1.0 / q, 0.0))),
                "da=1+q^{-1}bc",
            );
        }
    }

    #[test]
    fn left_and_right_multiplication_commute_on_interior() {
        let q = 0.5;
        let basis = PwBasis::new(h(5));
        let mut cache = CgCache::new(q);
        let left = mult_matrix(&SuqGenerator::A.element(), Side::Left, &basis, q, &mut cache);
        let right = mult_matrix(&SuqGenerator::B.element(), Side::Right, &basis, q, &mut cache);
        let interior = basis.interior(HalfInt::ONE);
        let comm = left.mul(&right).sub(&right.mul(&left)).select_columns(&interior);
        assert!(comm.frobenius_norm() < 1e-12);
    }

    #[test]
    fn kappa_values() {
        let q = 0.5;
        // top rung annihilated: kappa^l_{l+1} = 0
        assert!(kappa_coeff(h(1), h(3), q).abs() < 1e-15);
        // kappa^{1/2}_1 = sqrt([1]^2 - [1/2]^2)
        let expect = (1.0 - q_number(h(1), q).powi(2)).sqrt();
        assert!((kappa_coeff(h(1), h(2), q) - expect).abs() < 1e-15);
        // spinor rung: kappa^l_{1/2} = [l+1/2]
        for l2 in [1, 3, 5, 7] {
            let l = h(l2);
            let expect = q_number(l + HalfInt::HALF, q);
            assert!((kappa_coeff(l, HalfInt::HALF, q) - expect).abs() < 1e-12);
        }
    }
}
