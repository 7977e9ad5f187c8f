//! Standard Podles-sphere spectral triple at Peter-Weyl truncation.
//!
//! The quantized SU(2) function algebra is generated by a, b, c, d; its
//! Peter-Weyl basis t^l_{ij} carries the left and right regular actions.
//! The sphere sits inside as the j-degree-zero part, the spinor bundles are
//! the j = +-1/2 columns, and the Dirac operator is the off-diagonal pair of
//! ladder operators with coefficients kappa^l_k.
//!
//! Truncation keeps l <= l_max and drops the overflow shell; every
//! verification restricts to interior shells where multiplication operators
//! agree with the abstract product rule exactly.

pub mod algebra;
pub mod cg;
pub mod half;

use ndarray::Array2;
use num_complex::Complex64 as C64;

pub use algebra::{PeterWeylIndex, PwBasis, PwElement, Side, SuqGenerator};
pub use cg::{q_number, q_number_f, CgCache};
pub use half::HalfInt;

use crate::error::{Error, Result};
use crate::geom_torus::TruncatedTriple;
use crate::lab::{run_sweep, SweepReport};
use crate::opcore::{operator_norm, ComplexMatrix, HermitianOperator};

/// The coefficient kappa^l_k = sqrt([l+1/2]_q^2 - [k-1/2]_q^2).
///
/// The q-number formula is applied verbatim to half-integer arguments. A
/// negative radicand signals an off-ladder index.
pub fn kappa(l: HalfInt, k: HalfInt, q: f64) -> Result<f64> {
    let radicand = algebra::kappa_radicand(l, k, q);
    if radicand < -1e-12 {
        return Err(Error::OffLadder { l: l.to_string(), k: k.to_string(), radicand });
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Peter-Weyl truncation of the quantized SU(2) function algebra with its
/// spinor sectors and Haar weights.
#[derive(Debug, Clone)]
pub struct PodlesTruncation {
    pub l_max: HalfInt,
    pub q: f64,
    pub basis: PwBasis,
    pub haar_weights: Vec<f64>,
    /// Full-space positions of S+ (j = +1/2) and S- (j = -1/2).
    pub spinor_plus: Vec<usize>,
    pub spinor_minus: Vec<usize>,
}

impl PodlesTruncation {
    pub fn new(l_max: HalfInt, q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Parameter(format!("q = {q} outside (0,1)")));
        }
        if l_max < HalfInt::HALF {
            return Err(Error::Parameter(format!("l_max = {l_max} below 1/2")));
        }
        let basis = PwBasis::new(l_max);
        let haar_weights: Vec<f64> = basis
            .items()
            .iter()
            .map(|idx| algebra::haar_weight(idx.l, idx.i, q))
            .collect();
        let spinor = |j: i32| -> Vec<usize> {
            basis
                .items()
                .iter()
                .enumerate()
                .filter(|(_, idx)| idx.j.doubled() == j)
                .map(|(k, _)| k)
                .collect()
        };
        let spinor_plus = spinor(1);
        let spinor_minus = spinor(-1);
        Ok(PodlesTruncation { l_max, q, basis, haar_weights, spinor_plus, spinor_minus })
    }

    pub fn cache(&self) -> CgCache {
        CgCache::new(self.q)
    }

    /// Spinor-space index list: S+ then S-.
    pub fn spinor_indices(&self) -> Vec<usize> {
        let mut all = self.spinor_plus.clone();
        all.extend_from_slice(&self.spinor_minus);
        all
    }

    /// Positions within the spinor enumeration whose shell satisfies
    /// l <= l_max - margin.
    pub fn spinor_interior(&self, margin: HalfInt) -> Vec<usize> {
        let items = self.basis.items();
        self.spinor_indices()
            .iter()
            .enumerate()
            .filter(|(_, &full)| items[full].l <= self.l_max - margin)
            .map(|(s, _)| s)
            .collect()
    }

    /// Full-space interior positions.
    pub fn interior(&self, margin: HalfInt) -> Vec<usize> {
        self.basis.interior(margin)
    }
}

/// Left/right multiplication by one of the generators a, b, c, d on the
/// truncated orthonormalized basis.
pub fn generator_mult(g: SuqGenerator, side: Side, tr: &PodlesTruncation) -> ComplexMatrix {
    let mut cache = tr.cache();
    algebra::mult_matrix(&g.element(), side, &tr.basis, tr.q, &mut cache)
}

/// Left multiplication by an arbitrary element.
pub fn element_mult(elem: &PwElement, side: Side, tr: &PodlesTruncation) -> ComplexMatrix {
    let mut cache = tr.cache();
    algebra::mult_matrix(elem, side, &tr.basis, tr.q, &mut cache)
}

/// The ladder operators as full-space matrices.
pub fn partial_e(tr: &PodlesTruncation) -> ComplexMatrix {
    algebra::operator_matrix(&tr.basis, tr.q, |el| el.raise_e(tr.q))
}

pub fn partial_f(tr: &PodlesTruncation) -> ComplexMatrix {
    algebra::operator_matrix(&tr.basis, tr.q, |el| el.lower_f(tr.q))
}

/// Diagonal actions (K left, K^{-1} left, K right, K^{-1} right): the left
/// action scales t^l_{ij} by q^j, the right action by q^i.
pub fn k_actions(
    tr: &PodlesTruncation,
) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let diag = |f: &dyn Fn(&PeterWeylIndex) -> f64| -> ComplexMatrix {
        ComplexMatrix::real_diagonal(
            &tr.basis.items().iter().map(f).collect::<Vec<_>>(),
        )
    };
    let q = tr.q;
    (
        diag(&|idx| q.powf(idx.j.as_f64())),
        diag(&|idx| q.powf(-idx.j.as_f64())),
        diag(&|idx| q.powf(idx.i.as_f64())),
        diag(&|idx| q.powf(-idx.i.as_f64())),
    )
}

/// Haar state of an operator given as an algebra-element action: the vacuum
/// expectation at the unit basis vector.
pub fn haar_state(x: &ComplexMatrix, tr: &PodlesTruncation) -> C64 {
    let unit = tr
        .basis
        .index(PeterWeylIndex { l: HalfInt::ZERO, i: HalfInt::ZERO, j: HalfInt::ZERO })
        .expect("unit in basis");
    x.array()[[unit, unit]]
}

/// Dirac operator on S+ (+) S- with kappa coefficients, plus the sphere
/// generators A = c*c, B = ac*, B* = cd acting on the spinors.
pub fn build_podles_dirac(tr: &PodlesTruncation) -> Result<TruncatedTriple> {
    let items = tr.basis.items();
    let n_plus = tr.spinor_plus.len();
    let n_minus = tr.spinor_minus.len();
    let dim = n_plus + n_minus;
    let mut mat = Array2::zeros((dim, dim));
    // partial_F : S+ -> S-, partial_E : S- -> S+, both with kappa^l_{1/2}.
    for (s_plus, &full) in tr.spinor_plus.iter().enumerate() {
        let idx = items[full];
        let partner = PeterWeylIndex { l: idx.l, i: idx.i, j: -idx.j };
        let full_minus = tr.basis.index(partner).expect("paired spinor");
        let s_minus = tr
            .spinor_minus
            .iter()
            .position(|&k| k == full_minus)
            .expect("paired spinor position");
        let coeff = kappa(idx.l, HalfInt::HALF, tr.q)?;
        mat[[s_plus, n_plus + s_minus]] = C64::new(coeff, 0.0);
        mat[[n_plus + s_minus, s_plus]] = C64::new(coeff, 0.0);
    }
    let dirac = HermitianOperator::from_matrix(ComplexMatrix::new(mat)?)?;

    let mut cache = tr.cache();
    let q = tr.q;
    let a = SuqGenerator::A.element();
    let b = SuqGenerator::B.element();
    let c = SuqGenerator::C.element();
    let d = SuqGenerator::D.element();
    let sphere_a = b.product(&c, &mut cache).scale(-1.0 / q);
    let sphere_b = a.product(&b, &mut cache).scale(-1.0 / q);
    let sphere_b_star = c.product(&d, &mut cache);
    let spinor_all = tr.spinor_indices();
    let restrict = |el: &PwElement, cache: &mut CgCache| -> ComplexMatrix {
        algebra::mult_matrix(el, Side::Left, &tr.basis, q, cache).compress(&spinor_all)
    };
    let generators = vec![
        ("A".to_string(), restrict(&sphere_a, &mut cache)),
        ("B".to_string(), restrict(&sphere_b, &mut cache)),
        ("Bstar".to_string(), restrict(&sphere_b_star, &mut cache)),
    ];
    let interior_mask: Vec<bool> = spinor_all
        .iter()
        .map(|&full| items[full].l <= tr.l_max - HalfInt::ONE)
        .collect();
    Ok(TruncatedTriple {
        label: format!("podles l_max={} q={}", tr.l_max, tr.q),
        dirac,
        generators,
        interior_mask,
    })
}

/// The adjusted adjoint action
/// omega_z(t^l_{ij}) : beta -> sum_k q^{-2zk} t^l_{ik} beta (t^l_{jk})*,
/// assembled column-by-column through exact element products.
pub fn omega_action(idx: PeterWeylIndex, z: f64, tr: &PodlesTruncation) -> ComplexMatrix {
    let q = tr.q;
    let mut cache = tr.cache();
    algebra::operator_matrix(&tr.basis, q, |beta| {
        let mut acc = PwElement::default();
        for k in idx.l.projections() {
            let left = PwElement::basis(PeterWeylIndex { l: idx.l, i: idx.i, j: k });
            let right = PwElement::basis(PeterWeylIndex { l: idx.l, i: idx.j, j: k }).star(q);
            let term = left
                .product(beta, &mut cache)
                .product(&right, &mut cache)
                .scale(q.powf(-2.0 * z * k.as_f64()));
            acc = acc.add(&term);
        }
        acc
    })
}

/// omega_z of a starred basis element:
/// omega_z((t^l_{ij})*) : beta -> sum_k q^{2((z-1)k + j)} (t^l_{ik})* beta t^l_{jk}.
pub fn omega_action_star(idx: PeterWeylIndex, z: f64, tr: &PodlesTruncation) -> ComplexMatrix {
    let q = tr.q;
    let mut cache = tr.cache();
    algebra::operator_matrix(&tr.basis, q, |beta| {
        let mut acc = PwElement::default();
        for k in idx.l.projections() {
            let left = PwElement::basis(PeterWeylIndex { l: idx.l, i: idx.i, j: k }).star(q);
            let right = PwElement::basis(PeterWeylIndex { l: idx.l, i: idx.j, j: k });
            let term = left
                .product(beta, &mut cache)
                .product(&right, &mut cache)
                .scale(q.powf(2.0 * ((z - 1.0) * k.as_f64() + idx.j.as_f64())));
            acc = acc.add(&term);
        }
        acc
    })
}

/// Element-level conformal factor components and their checks.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MuHalfReport {
    /// Distance between the generator-display assembly of mu^{1/2} and
    /// q^{1/2} P+ + q^{-1/2} P-.
    pub display_residual: f64,
    /// || P+ + P- - 1 || at element level.
    pub sum_residual: f64,
    /// max over both projections of || P^2 - P || at element level.
    pub idempotency_residual: f64,
    /// Largest defect of mu (P+- v) = q^{+-1/2} (P+- v) over strictly
    /// interior v; zero when the strict interior is empty.
    pub eigenvalue_residual: f64,
    /// Element-level distance of mu^{1/2} from the identity (classical gap).
    pub identity_gap: f64,
}

fn element_norm(el: &PwElement) -> f64 {
    el.terms.iter().map(|&(_, c)| c * c).sum::<f64>().sqrt()
}

/// Assemble mu^{1/2} both from the generator display and as
/// q^{1/2} P+ + q^{-1/2} P- with P+- = T^{1/2}_{+-1/2} T^{1/2*}_{+-1/2},
/// and verify the projection identities.
pub fn mu_half_check(tr: &PodlesTruncation) -> Result<MuHalfReport> {
    if tr.l_max < HalfInt::from_doubled(3) {
        return Err(Error::Parameter("mu^{1/2} check needs l_max >= 3/2".into()));
    }
    let q = tr.q;
    let mut cache = tr.cache();
    let half = HalfInt::HALF;
    let t = |i: i32, j: i32| {
        PwElement::basis(PeterWeylIndex {
            l: half,
            i: HalfInt::from_doubled(i),
            j: HalfInt::from_doubled(j),
        })
    };
    // Projections: P_k[(i,j)] = t_{i,k} (t_{j,k})*.
    let proj = |k: i32, cache: &mut CgCache| -> [[PwElement; 2]; 2] {
        let mut rows: Vec<Vec<PwElement>> = Vec::new();
        for i in [-1, 1] {
            let mut row = Vec::new();
            for j in [-1, 1] {
                row.push(t(i, k).product(&t(j, k).star(q), cache));
            }
            rows.push(row);
        }
        [
            [rows[0][0].clone(), rows[0][1].clone()],
            [rows[1][0].clone(), rows[1][1].clone()],
        ]
    };
    let p_plus = proj(1, &mut cache);
    let p_minus = proj(-1, &mut cache);
    let sq = q.sqrt();
    let mu = |i: usize, j: usize| p_plus[i][j].scale(sq).add(&p_minus[i][j].scale(1.0 / sq));

    // Generator display: A = -q^{-1} b c, B = -q^{-1} a b, B* = c d.
    let a = SuqGenerator::A.element();
    let b = SuqGenerator::B.element();
    let c = SuqGenerator::C.element();
    let d = SuqGenerator::D.element();
    let sphere_a = b.product(&c, &mut cache).scale(-1.0 / q);
    let sphere_b = a.product(&b, &mut cache).scale(-1.0 / q);
    let sphere_b_star = c.product(&d, &mut cache);
    let unit = PwElement::unit();
    let display = [
        [
            // q^{1/2} q^2 A + q^{-1/2}(1 - q^2 A)
            unit.scale(1.0 / sq).add(&sphere_a.scale(q * q * (sq - 1.0 / sq))),
            sphere_b.scale(1.0 / sq - sq),
        ],
        [
            sphere_b_star.scale(1.0 / sq - sq),
            // q^{1/2}(1 - A) + q^{-1/2} A
            unit.scale(sq).add(&sphere_a.scale(1.0 / sq - sq)),
        ],
    ];

    let mut display_residual = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            display_residual = display_residual.max(element_norm(&display[i][j].sub(&mu(i, j))));
        }
    }

    let mut sum_residual = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let mut s = p_plus[i][j].add(&p_minus[i][j]);
            if i == j {
                s = s.sub(&unit);
            }
            sum_residual = sum_residual.max(element_norm(&s));
        }
    }

    let mut idempotency_residual = 0.0f64;
    for p in [&p_plus, &p_minus] {
        for i in 0..2 {
            for j in 0..2 {
                // P^2 entry: sum_m P[i][m] P[m][j]
                let mut sq_entry = PwElement::default();
                for m in 0..2 {
                    sq_entry = sq_entry.add(&p[i][m].product(&p[m][j], &mut cache));
                }
                idempotency_residual =
                    idempotency_residual.max(element_norm(&sq_entry.sub(&p[i][j])));
            }
        }
    }

    // Operator-level eigenvalue check on the strict interior, where the
    // assembled matrices act exactly like the abstract elements.
    let dim = tr.basis.dim();
    let assemble = |entries: &[[PwElement; 2]; 2], cache: &mut CgCache| -> ComplexMatrix {
        let mut mat = Array2::zeros((2 * dim, 2 * dim));
        for i in 0..2 {
            for j in 0..2 {
                let block = algebra::mult_matrix(&entries[i][j], Side::Left, &tr.basis, q, cache);
                for r in 0..dim {
                    for cc in 0..dim {
                        mat[[i * dim + r, j * dim + cc]] = block.array()[[r, cc]];
                    }
                }
            }
        }
        ComplexMatrix::new(mat).expect("assembled block operator")
    };
    let mu_entries = [
        [mu(0, 0), mu(0, 1)],
        [mu(1, 0), mu(1, 1)],
    ];
    let mu_op = assemble(&mu_entries, &mut cache);
    let plus_op = assemble(&p_plus, &mut cache);
    let minus_op = assemble(&p_minus, &mut cache);
    let strict: Vec<usize> = tr.interior(HalfInt::from_int(2));
    let mut eigenvalue_residual = 0.0f64;
    for &col in &strict {
        for sector in 0..2 {
            let mut v = ndarray::Array1::<C64>::zeros(2 * dim);
            v[sector * dim + col] = C64::new(1.0, 0.0);
            for (p_op, eig) in [(&plus_op, sq), (&minus_op, 1.0 / sq)] {
                let w = p_op.array().dot(&v);
                let norm_w = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if norm_w < 1e-14 {
                    continue;
                }
                let mw = mu_op.array().dot(&w);
                let defect = (&mw - &w.mapv(|z| z * C64::new(eig, 0.0)))
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                eigenvalue_residual = eigenvalue_residual.max(defect / norm_w);
            }
        }
    }

    let mut identity_gap = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let mut g = mu(i, j);
            if i == j {
                g = g.sub(&unit);
            }
            identity_gap = identity_gap.max(element_norm(&g));
        }
    }

    Ok(MuHalfReport {
        display_residual,
        sum_residual,
        idempotency_residual,
        eigenvalue_residual,
        identity_gap,
    })
}

/// Residuals of the six defining relations, as operators on interior columns.
pub fn relation_residuals(tr: &PodlesTruncation) -> Vec<(String, f64)> {
    let m = |g: SuqGenerator| generator_mult(g, Side::Left, tr);
    let (a, b, c, d) = (m(SuqGenerator::A), m(SuqGenerator::B), m(SuqGenerator::C), m(SuqGenerator::D));
    let interior = tr.interior(HalfInt::ONE);
    let id = ComplexMatrix::identity(tr.basis.dim());
    let q = C64::new(tr.q, 0.0);
    let qinv = C64::new(1.0 / tr.q, 0.0);
    let res = |lhs: ComplexMatrix, rhs: ComplexMatrix| -> f64 {
        lhs.sub(&rhs).select_columns(&interior).frobenius_norm()
    };
    vec![
        ("ab=qba".into(), res(a.mul(&b), b.mul(&a).scale(q))),
        ("ac=qca".into(), res(a.mul(&c), c.mul(&a).scale(q))),
        ("bd=qdb".into(), res(b.mul(&d), d.mul(&b).scale(q))),
        ("cd=qdc".into(), res(c.mul(&d), d.mul(&c).scale(q))),
        ("bc=cb".into(), res(b.mul(&c), c.mul(&b))),
        ("ad=1+qbc".into(), res(a.mul(&d), id.add(&b.mul(&c).scale(q)))),
        ("da=1+bc/q".into(), res(d.mul(&a), id.add(&b.mul(&c).scale(qinv)))),
    ]
}

/// Residuals of the twisted Leibniz identity for each generator.
pub fn leibniz_residuals(tr: &PodlesTruncation) -> Vec<(String, f64)> {
    let de = partial_e(tr);
    let (kl, _, _, _) = k_actions(tr);
    let interior = tr.interior(HalfInt::ONE);
    [SuqGenerator::A, SuqGenerator::B, SuqGenerator::C, SuqGenerator::D]
        .iter()
        .map(|&g| {
            let gl = element_mult(&g.element(), Side::Left, tr);
            let dg = element_mult(&g.element().raise_e(tr.q), Side::Left, tr);
            let kg = element_mult(&g.element().k_left(-1, tr.q), Side::Left, tr);
            let lhs = de.mul(&gl);
            let rhs = dg.mul(&kl).add(&kg.mul(&de));
            (
                format!("leibniz_{}", g.name()),
                lhs.sub(&rhs).select_columns(&interior).frobenius_norm(),
            )
        })
        .collect()
}

/// Largest residual of partial_E(x*) + q (partial_F x)* over generator words
/// of length at most 2, at element level.
pub fn star_relation_residual(tr: &PodlesTruncation) -> f64 {
    let q = tr.q;
    let mut cache = tr.cache();
    let gens = [SuqGenerator::A, SuqGenerator::B, SuqGenerator::C, SuqGenerator::D];
    let mut words: Vec<PwElement> = gens.iter().map(|g| g.element()).collect();
    for g in gens {
        for h in gens {
            words.push(g.element().product(&h.element(), &mut cache));
        }
    }
    words
        .iter()
        .map(|w| {
            let lhs = w.star(q).raise_e(q);
            let rhs = w.lower_f(q).star(q).scale(-q);
            element_norm(&lhs.sub(&rhs))
        })
        .fold(0.0, f64::max)
}

/// Largest modular-property defect phi(xy) - phi(y (K^2 -> x <- K^2)) over
/// seeded random generator words of length at most 3.
pub fn modular_property_residual(tr: &PodlesTruncation, words: usize, seed: u64) -> f64 {
    use rand::Rng;
    let q = tr.q;
    let mut cache = tr.cache();
    let mut rng = crate::randmat::seeded_rng(seed);
    let gens = [SuqGenerator::A, SuqGenerator::B, SuqGenerator::C, SuqGenerator::D];
    let mut worst = 0.0f64;
    for _ in 0..words {
        let draw = |cache: &mut CgCache, rng: &mut rand_chacha::ChaCha8Rng| {
            let len = rng.gen_range(1..=3);
            let mut el = PwElement::unit();
            for _ in 0..len {
                el = el.product(&gens[rng.gen_range(0..4)].element(), cache);
            }
            el
        };
        let x = draw(&mut cache, &mut rng);
        let y = draw(&mut cache, &mut rng);
        let lhs = x.product(&y, &mut cache).unit_coefficient();
        let twisted = PwElement {
            terms: x
                .terms
                .iter()
                .map(|&(idx, coeff)| {
                    (idx, coeff * q.powf(2.0 * (idx.i.as_f64() + idx.j.as_f64())))
                })
                .collect(),
        };
        let rhs = y.product(&twisted, &mut cache).unit_coefficient();
        worst = worst.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
    }
    worst
}

/// Largest residual of the omega composition identity
/// sum_j omega_0(t^l_{i,j}) omega_1((t^l_{i',j})*) = omega_{-1}(t^l_{i,i'})(1)
/// for the fundamental block, on interior columns.
pub fn omega_composition_residual(tr: &PodlesTruncation) -> f64 {
    let q = tr.q;
    let mut cache = tr.cache();
    let dim = tr.basis.dim();
    let h1 = HalfInt::HALF;
    let mut worst = 0.0f64;
    for i in [-1, 1] {
        for ip in [-1, 1] {
            let mut lhs = ComplexMatrix::zeros(dim);
            for j in [-1, 1] {
                let left = omega_action(
                    PeterWeylIndex { l: h1, i: HalfInt::from_doubled(i), j: HalfInt::from_doubled(j) },
                    0.0,
                    tr,
                );
                let right = omega_action_star(
                    PeterWeylIndex { l: h1, i: HalfInt::from_doubled(ip), j: HalfInt::from_doubled(j) },
                    1.0,
                    tr,
                );
                lhs = lhs.add(&left.mul(&right));
            }
            let mut rhs_el = PwElement::default();
            for k in [-1, 1] {
                let lterm = PwElement::basis(PeterWeylIndex {
                    l: h1,
                    i: HalfInt::from_doubled(i),
                    j: HalfInt::from_doubled(k),
                });
                let rterm = PwElement::basis(PeterWeylIndex {
                    l: h1,
                    i: HalfInt::from_doubled(ip),
                    j: HalfInt::from_doubled(k),
                })
                .star(q);
                rhs_el = rhs_el
                    .add(&lterm.product(&rterm, &mut cache).scale(q.powf(k as f64)));
            }
            let rhs = element_mult(&rhs_el, Side::Left, tr);
            let interior = tr.interior(HalfInt::ONE);
            worst = worst
                .max(lhs.sub(&rhs).select_columns(&interior).frobenius_norm());
        }
    }
    worst
}

/// Largest adjoint defect || omega_z(x)^H - omega_{-z+2}(x*) || on the
/// interior block, over the fundamental matrix elements.
pub fn omega_adjoint_residual(tr: &PodlesTruncation, z: f64) -> f64 {
    let interior = tr.interior(HalfInt::ONE);
    let h1 = HalfInt::HALF;
    let mut worst = 0.0f64;
    for i in [-1, 1] {
        for j in [-1, 1] {
            let idx = PeterWeylIndex {
                l: h1,
                i: HalfInt::from_doubled(i),
                j: HalfInt::from_doubled(j),
            };
            let m1 = omega_action(idx, z, tr);
            let m2 = omega_action_star(idx, -z + 2.0, tr);
            worst = worst.max(m1.adjoint().sub(&m2).compress(&interior).frobenius_norm());
        }
    }
    worst
}

/// Twisted commutator norm at one truncation:
/// || partial_E omega_z(g) - omega_{z+1}(g) partial_E ||
/// restricted to interior spinor columns.
pub fn twisted_commutator_value(
    g: SuqGenerator,
    z: f64,
    l_max: HalfInt,
    q: f64,
) -> Result<f64> {
    let tr = PodlesTruncation::new(l_max, q)?;
    let idx = g.element().terms[0].0;
    let omega_z = omega_action(idx, z, &tr);
    let omega_z1 = omega_action(idx, z + 1.0, &tr);
    let de = partial_e(&tr);
    let m = de.mul(&omega_z).sub(&omega_z1.mul(&de));
    let spinor_all = tr.spinor_indices();
    let interior = tr.spinor_interior(HalfInt::ONE);
    let cols: Vec<usize> = interior.iter().map(|&s| spinor_all[s]).collect();
    Ok(operator_norm(&m.select_columns(&cols)))
}

/// Untwisted contrast: || partial_E lmult(g) - lmult(g) partial_E || on the
/// same columns; grows with the truncation, showing the twist is necessary.
pub fn untwisted_commutator_value(g: SuqGenerator, l_max: HalfInt, q: f64) -> Result<f64> {
    let tr = PodlesTruncation::new(l_max, q)?;
    let lm = generator_mult(g, Side::Left, &tr);
    let de = partial_e(&tr);
    let m = de.mul(&lm).sub(&lm.mul(&de));
    let spinor_all = tr.spinor_indices();
    let interior = tr.spinor_interior(HalfInt::ONE);
    let cols: Vec<usize> = interior.iter().map(|&s| spinor_all[s]).collect();
    Ok(operator_norm(&m.select_columns(&cols)))
}

/// Sweep of the twisted commutator norm over truncation levels.
pub fn twisted_commutator_sweep(
    g: SuqGenerator,
    z: f64,
    l_list: &[HalfInt],
    q: f64,
    seed: u64,
) -> Result<SweepReport> {
    let params: Vec<f64> = l_list.iter().map(|l| l.as_f64()).collect();
    run_sweep(
        "podles",
        &format!("twisted_commutator_{}_z={z}", g.name()),
        "l_max",
        &params,
        seed,
        "",
        |l| twisted_commutator_value(g, z, HalfInt::from_doubled((l * 2.0).round() as i32), q),
    )
}

/// Sweep of the untwisted contrast.
pub fn untwisted_commutator_sweep(
    g: SuqGenerator,
    l_list: &[HalfInt],
    q: f64,
    seed: u64,
) -> Result<SweepReport> {
    let params: Vec<f64> = l_list.iter().map(|l| l.as_f64()).collect();
    run_sweep(
        "podles",
        &format!("untwisted_commutator_{}", g.name()),
        "l_max",
        &params,
        seed,
        "",
        |l| untwisted_commutator_value(g, HalfInt::from_doubled((l * 2.0).round() as i32), q),
    )
}
