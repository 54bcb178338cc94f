//! Class functions and the operators on them: inner products, restriction,
//! induction, truncation, Frobenius–Schur indicators, central characters
//! and decompositions.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chartab::CharacterTable;
use crate::cyclo::Cyclotomic;
use crate::group::{power_class_map, FiniteGroup, GroupId, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassFunctionError {
    #[error("class function lives on group {found}, expected {expected}")]
    GroupMismatch { expected: GroupId, found: GroupId },
    #[error("multiplicity of irreducible {index} is {value}, not an integer")]
    NonIntegerMultiplicity { index: usize, value: String },
    #[error("element {0} is not central")]
    NotCentral(usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("Frobenius-Schur indicator {0} is not -1, 0 or 1; input is not irreducible")]
    BadIndicator(String),
    #[error("not the character of a real representation: irreducible {witness} ({reason})")]
    NotReal { witness: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, ClassFunctionError>;

/// A function on the conjugacy classes of one group, valued in cyclotomics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFunction {
    pub group: GroupId,
    pub values: Vec<Cyclotomic>,
}

impl ClassFunction {
    pub fn new(group: GroupId, values: Vec<Cyclotomic>) -> Self {
        ClassFunction { group, values }
    }

    pub fn zero(g: &FiniteGroup) -> Self {
        Self::constant(g, Cyclotomic::zero())
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Self::constant(g, Cyclotomic::one())
    }

    fn constant(g: &FiniteGroup, v: Cyclotomic) -> Self {
        ClassFunction {
            group: g.id(),
            values: vec![v; g.classes().num_classes()],
        }
    }

    /// Character of the regular representation.
    pub fn regular(g: &FiniteGroup) -> Self {
        let mut f = Self::zero(g);
        f.values[0] = Cyclotomic::from_int(g.order() as i64);
        f
    }

    /// Value at the identity class.
    pub fn degree(&self) -> &Cyclotomic {
        &self.values[0]
    }

    pub fn check_group(&self, id: GroupId) -> Result<()> {
        if self.group != id {
            return Err(ClassFunctionError::GroupMismatch {
                expected: id,
                found: self.group,
            });
        }
        Ok(())
    }

    pub fn conj(&self) -> Self {
        self.map(Cyclotomic::conj)
    }

    pub fn map(&self, f: impl Fn(&Cyclotomic) -> Cyclotomic) -> Self {
        ClassFunction {
            group: self.group,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.map(|v| v.scale_int(k))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        other.check_group(self.group)?;
        Ok(ClassFunction {
            group: self.group,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        other.check_group(self.group)?;
        Ok(ClassFunction {
            group: self.group,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    /// Integer combination `Σ coeffs[i] · fns[i]`.
    pub fn combination(group: GroupId, fns: &[ClassFunction], coeffs: &[i64]) -> Self {
        let len = fns.first().map_or(0, |f| f.values.len());
        let mut values = vec![Cyclotomic::zero(); len];
        for (f, &c) in fns.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (acc, v) in values.iter_mut().zip(&f.values) {
                *acc = &*acc + &v.scale_int(c);
            }
        }
        ClassFunction { group, values }
    }
}

/// `(1/|G|) Σ_c |c| φ(c) conj(ψ(c))`.
pub fn inner_product(g: &FiniteGroup, phi: &ClassFunction, psi: &ClassFunction) -> Result<Cyclotomic> {
    phi.check_group(g.id())?;
    psi.check_group(g.id())?;
    let cd = g.classes();
    let total: Cyclotomic = phi
        .values
        .iter()
        .zip(&psi.values)
        .zip(&cd.sizes)
        .filter(|((a, b), _)| !a.is_zero() && !b.is_zero())
        .map(|((a, b), &s)| (a * &b.conj()).scale_int(s as i64))
        .sum();
    Ok(total.div_int(g.order() as i64))
}

pub fn restrict(parent: &FiniteGroup, sub: &Subgroup, chi: &ClassFunction) -> Result<ClassFunction> {
    chi.check_group(parent.id())?;
    let fusion = sub.fusion(parent);
    Ok(ClassFunction {
        group: sub.group.id(),
        values: fusion.iter().map(|&c| chi.values[c].clone()).collect(),
    })
}

/// Induction through the class fusion:
/// `ψ^G(g) = |C_G(g)| Σ_{H-classes d ⊆ class(g)} ψ(d) / |C_H(d)|`.
pub fn induce(parent: &FiniteGroup, sub: &Subgroup, psi: &ClassFunction) -> Result<ClassFunction> {
    psi.check_group(sub.group.id())?;
    let pc = parent.classes();
    let hc = sub.group.classes();
    let fusion = sub.fusion(parent);
    let mut acc: Vec<Cyclotomic> = vec![Cyclotomic::zero(); pc.num_classes()];
    // Equivalently |C_G(g)|/|H| · Σ_d |d| ψ(d).
    for (d, &c) in fusion.iter().enumerate() {
        if psi.values[d].is_zero() {
            continue;
        }
        acc[c] = &acc[c] + &psi.values[d].scale_int(hc.sizes[d] as i64);
    }
    let h = sub.order() as i64;
    let values = acc
        .iter()
        .enumerate()
        .map(|(c, v)| {
            if v.is_zero() {
                return Cyclotomic::zero();
            }
            v.scale_int(pc.centralizer_orders[c] as i64).div_int(h)
        })
        .collect();
    Ok(ClassFunction {
        group: parent.id(),
        values,
    })
}

/// Reference induction straight from the definition,
/// `ψ^G(g) = (1/|H|) Σ_{x ∈ G, x g x⁻¹ ∈ H} ψ(x g x⁻¹)`. `O(|G|)` per class.
pub fn induce_elementwise(
    parent: &FiniteGroup,
    sub: &Subgroup,
    psi: &ClassFunction,
) -> Result<ClassFunction> {
    psi.check_group(sub.group.id())?;
    let pc = parent.classes();
    let hc = sub.group.classes();
    let values = pc
        .reps
        .iter()
        .map(|&g| {
            let total: Cyclotomic = (0..parent.order())
                .filter_map(|x| {
                    let y = parent.conjugate(x, g);
                    sub.embedding
                        .binary_search(&y)
                        .ok()
                        .map(|hy| psi.values[hc.class_of[hy]].clone())
                })
                .sum();
            total.div_int(sub.order() as i64)
        })
        .collect();
    Ok(ClassFunction {
        group: parent.id(),
        values,
    })
}

/// Precomputed truncation data for a pair `N ⊴ P ≤ G`: for each `P`-class
/// representative `h`, the distribution of `G`-classes over the coset `N h`.
#[derive(Debug, Clone)]
pub struct Truncation {
    p_id: GroupId,
    parent_id: GroupId,
    n_order: u64,
    counts: Vec<Vec<(usize, u64)>>,
}

impl Truncation {
    pub fn new(parent: &FiniteGroup, p: &Subgroup, n: &Subgroup) -> Result<Self> {
        if !n.is_normal_in(p, parent) {
            return Err(ClassFunctionError::NotNormal);
        }
        let pcd = parent.classes();
        let counts = p
            .group
            .classes()
            .reps
            .iter()
            .map(|&h| {
                let h = p.embedding[h];
                let mut tally = vec![0u64; pcd.num_classes()];
                for &x in &n.embedding {
                    tally[pcd.class_of[parent.mul(x, h)]] += 1;
                }
                tally
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, t)| t > 0)
                    .collect()
            })
            .collect();
        Ok(Truncation {
            p_id: p.group.id(),
            parent_id: parent.id(),
            n_order: n.order() as u64,
            counts,
        })
    }

    /// `T(χ)(h) = (1/|N|) Σ_{x ∈ N} χ(x h)` at each class of `P`.
    pub fn apply(&self, chi: &ClassFunction) -> Result<ClassFunction> {
        chi.check_group(self.parent_id)?;
        let values = self
            .counts
            .iter()
            .map(|row| {
                let s: Cyclotomic = row
                    .iter()
                    .filter(|(c, _)| !chi.values[*c].is_zero())
                    .map(|&(c, t)| chi.values[c].scale_int(t as i64))
                    .sum();
                s.div_int(self.n_order as i64)
            })
            .collect();
        Ok(ClassFunction {
            group: self.p_id,
            values,
        })
    }
}

/// Truncation of `χ` along `N ⊴ P`, as a class function on `P`.
pub fn truncate(
    parent: &FiniteGroup,
    chi: &ClassFunction,
    p: &Subgroup,
    n: &Subgroup,
) -> Result<ClassFunction> {
    Truncation::new(parent, p, n)?.apply(chi)
}

/// `(1/|G|) Σ_g χ(g²)` as an exact value.
pub fn fs_indicator(g: &FiniteGroup, chi: &ClassFunction) -> Result<Cyclotomic> {
    chi.check_group(g.id())?;
    let cd = g.classes();
    let sq = power_class_map(g, 2);
    let total: Cyclotomic = sq
        .iter()
        .zip(&cd.sizes)
        .map(|(&c, &s)| chi.values[c].scale_int(s as i64))
        .sum();
    Ok(total.div_int(g.order() as i64))
}

/// Indicator of a character assumed irreducible; must be −1, 0 or 1.
pub fn fs_indicator_irreducible(g: &FiniteGroup, chi: &ClassFunction) -> Result<i8> {
    let v = fs_indicator(g, chi)?;
    match v.as_i64() {
        Some(x @ -1..=1) => Ok(x as i8),
        _ => Err(ClassFunctionError::BadIndicator(v.to_string())),
    }
}

/// `ω_χ(z) = χ(z)/χ(1)` for central `z` (a parent element index).
pub fn central_character(g: &FiniteGroup, chi: &ClassFunction, z: usize) -> Result<Cyclotomic> {
    chi.check_group(g.id())?;
    let cd = g.classes();
    let c = cd.class_of[z];
    if cd.sizes[c] != 1 {
        return Err(ClassFunctionError::NotCentral(z));
    }
    let deg = chi.degree().as_rational().expect("degree is rational");
    Ok(chi.values[c].scale(&deg.recip()))
}

pub fn is_real_valued(chi: &ClassFunction) -> bool {
    chi.values.iter().all(Cyclotomic::is_real)
}

/// Multiplicities `⟨φ, χ_i⟩` against every irreducible of `table`.
pub fn decompose(g: &FiniteGroup, phi: &ClassFunction, table: &CharacterTable) -> Result<Vec<i64>> {
    phi.check_group(table.group)?;
    table
        .irreducibles
        .iter()
        .enumerate()
        .map(|(i, chi)| {
            let m = inner_product(g, phi, chi)?;
            m.as_integer()
                .and_then(|x| x.to_i64())
                .ok_or_else(|| ClassFunctionError::NonIntegerMultiplicity {
                    index: i,
                    value: m.to_string(),
                })
        })
        .collect()
}

/// One summand type in the real-representation basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RealBlock {
    /// `θ` with `ε(θ) = 1`, taken `count` times.
    Orthogonal { index: usize, count: i64 },
    /// `2ψ` with `ε(ψ) = −1`, taken `count` times.
    Symplectic { index: usize, count: i64 },
    /// `η + η̄` with `ε(η) = 0`, taken `count` times.
    ComplexPair { index: usize, conjugate: usize, count: i64 },
}

/// Certifies that `φ` is the character of a real representation by writing
/// it in the basis `θ`, `2ψ`, `η + η̄`.
pub fn real_basis_decomposition(
    g: &FiniteGroup,
    phi: &ClassFunction,
    table: &CharacterTable,
) -> Result<Vec<RealBlock>> {
    let mult = decompose(g, phi, table)?;
    let mut blocks = Vec::new();
    for (i, &m) in mult.iter().enumerate() {
        if m < 0 {
            return Err(ClassFunctionError::NotReal {
                witness: i,
                reason: format!("negative multiplicity {m}"),
            });
        }
        if m == 0 {
            continue;
        }
        match table.indicators[i] {
            1 => blocks.push(RealBlock::Orthogonal { index: i, count: m }),
            -1 => {
                if m % 2 != 0 {
                    return Err(ClassFunctionError::NotReal {
                        witness: i,
                        reason: format!("symplectic constituent with odd multiplicity {m}"),
                    });
                }
                blocks.push(RealBlock::Symplectic { index: i, count: m / 2 });
            }
            _ => {
                let j = table.conjugate_index[i];
                if mult[j] != m {
                    return Err(ClassFunctionError::NotReal {
                        witness: i,
                        reason: format!(
                            "multiplicity {m} differs from {} of its conjugate {j}",
                            mult[j]
                        ),
                    });
                }
                if i < j {
                    blocks.push(RealBlock::ComplexPair {
                        index: i,
                        conjugate: j,
                        count: m,
                    });
                }
            }
        }
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::dixon_table;
    use crate::field::PrimePowerField;
    use crate::group::{FiniteGroup, MatrixSpace, DEFAULT_CAP};
    use proptest::prelude::*;

    fn gl(n: usize, q: u64) -> FiniteGroup {
        let f = PrimePowerField::of_order(q).unwrap();
        let s = MatrixSpace::new(&f, n).unwrap();
        let total = (q as u128).pow((n * n) as u32);
        let els: Vec<_> = (0..total)
            .map(|k| s.from_key(k))
            .filter(|m| s.det(m) != 0)
            .collect();
        FiniteGroup::from_elements(&s, &els).unwrap()
    }

    fn upper_triangular(g: &FiniteGroup) -> Subgroup {
        Subgroup::from_predicate(g, |m| m.get(1, 0) == 0).unwrap()
    }

    fn unitriangular(g: &FiniteGroup) -> Subgroup {
        Subgroup::from_predicate(g, |m| m.get(1, 0) == 0 && m.get(0, 0) == 1 && m.get(1, 1) == 1)
            .unwrap()
    }

    fn quaternion() -> FiniteGroup {
        let f = PrimePowerField::of_order(3).unwrap();
        let s = MatrixSpace::new(&f, 2).unwrap();
        let i = s.from_rows(&[vec![0, 1], vec![2, 0]]).unwrap();
        let j = s.from_rows(&[vec![1, 1], vec![1, 2]]).unwrap();
        FiniteGroup::generate(&s, &[i, j], DEFAULT_CAP).unwrap()
    }

    #[test]
    fn frobenius_reciprocity_and_induction_oracle() {
        let g = gl(2, 3);
        let b = upper_triangular(&g);
        let gt = dixon_table(&g, 1).unwrap();
        let bt = dixon_table(&b.group, 1).unwrap();
        for psi in &bt.irreducibles {
            let ind = induce(&g, &b, psi).unwrap();
            assert_eq!(ind, induce_elementwise(&g, &b, psi).unwrap());
            for chi in &gt.irreducibles {
                let lhs = inner_product(&g, &ind, chi).unwrap();
                let rhs = inner_product(&b.group, psi, &restrict(&g, &b, chi).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn borel_induction_has_two_constituents() {
        let g = gl(2, 2);
        let b = upper_triangular(&g);
        let ind = induce(&g, &b, &ClassFunction::trivial(&b.group)).unwrap();
        assert_eq!(inner_product(&g, &ind, &ind).unwrap(), Cyclotomic::from_int(2));
    }

    #[test]
    fn quaternion_indicator() {
        let q8 = quaternion();
        assert_eq!(q8.order(), 8);
        let t = dixon_table(&q8, 5).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 1, 2]);
        assert_eq!(t.indicators, vec![1, 1, 1, 1, -1]);
    }

    #[test]
    fn involution_count_identity() {
        for (n, q) in [(2, 2), (2, 3), (3, 2), (2, 4)] {
            let g = gl(n, q);
            let t = dixon_table(&g, 2).unwrap();
            let lhs: i64 = t
                .indicators
                .iter()
                .zip(&t.degrees)
                .map(|(&e, &d)| e as i64 * d as i64)
                .sum();
            let id = g.identity();
            let rhs = (0..g.order()).filter(|&x| g.mul(x, x) == id).count() as i64;
            assert_eq!(lhs, rhs, "GL({n},{q})");
        }
    }

    #[test]
    fn truncation_matches_direct_average() {
        let g = gl(2, 3);
        let b = upper_triangular(&g);
        let u = unitriangular(&g);
        let t = dixon_table(&g, 1).unwrap();
        let tr = Truncation::new(&g, &b, &u).unwrap();
        let bc = b.group.classes();
        for chi in &t.irreducibles {
            let fast = tr.apply(chi).unwrap();
            for (k, &h) in bc.reps.iter().enumerate() {
                let h = b.embedding[h];
                let direct: Cyclotomic = u
                    .embedding
                    .iter()
                    .map(|&x| chi.values[g.classes().class_of[g.mul(x, h)]].clone())
                    .sum();
                assert_eq!(fast.values[k], direct.div_int(u.order() as i64));
            }
        }
        assert!(matches!(
            Truncation::new(&g, &Subgroup::whole(&g), &b),
            Err(ClassFunctionError::NotNormal)
        ));
    }

    #[test]
    fn decomposition_and_real_basis() {
        let g = gl(2, 3);
        let t = dixon_table(&g, 1).unwrap();
        let reg = ClassFunction::regular(&g);
        assert_eq!(decompose(&g, &reg, &t).unwrap(), t.degrees.iter().map(|&d| d as i64).collect::<Vec<_>>());
        assert!(real_basis_decomposition(&g, &reg, &t).is_ok());
        // A lone non-real irreducible is not realizable over R.
        if let Some(i) = (0..t.len()).find(|&i| t.indicators[i] == 0) {
            let err = real_basis_decomposition(&g, &t.irreducibles[i], &t).unwrap_err();
            assert!(matches!(err, ClassFunctionError::NotReal { witness, .. } if witness == i || witness == t.conjugate_index[i]));
            let pair = t.irreducibles[i].add(&t.irreducibles[t.conjugate_index[i]]).unwrap();
            assert!(real_basis_decomposition(&g, &pair, &t).is_ok());
        }
        let q8 = quaternion();
        let qt = dixon_table(&q8, 1).unwrap();
        let two_dim = &qt.irreducibles[4];
        assert!(real_basis_decomposition(&q8, two_dim, &qt).is_err());
        let doubled = two_dim.scale_int(2);
        assert_eq!(
            real_basis_decomposition(&q8, &doubled, &qt).unwrap(),
            vec![RealBlock::Symplectic { index: 4, count: 1 }]
        );
    }

    #[test]
    fn central_character_on_scalars() {
        let g = gl(2, 3);
        let t = dixon_table(&g, 1).unwrap();
        let minus_one = g.index_of(&g.space().scalar(2)).unwrap();
        for chi in &t.irreducibles {
            let w = central_character(&g, chi, minus_one).unwrap();
            assert!(w == Cyclotomic::one() || w == Cyclotomic::from_int(-1));
        }
        let non_central = g.index_of(&g.space().diag(&[1, 2])).unwrap();
        assert!(central_character(&g, &t.irreducibles[0], non_central).is_err());
    }

    #[test]
    fn group_mismatch_is_rejected() {
        let g = gl(2, 2);
        let h = gl(2, 3);
        let err = inner_product(&g, &ClassFunction::trivial(&h), &ClassFunction::trivial(&g));
        assert!(matches!(err, Err(ClassFunctionError::GroupMismatch { .. })));
    }

    #[test]
    fn serde_roundtrip() {
        let g = gl(2, 3);
        let t = dixon_table(&g, 1).unwrap();
        for chi in &t.irreducibles {
            let s = serde_json::to_string(chi).unwrap();
            let back: ClassFunction = serde_json::from_str(&s).unwrap();
            assert_eq!(&back, chi);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn inner_product_is_hermitian_and_bilinear(
            a in proptest::collection::vec(-3i64..4, 8),
            b in proptest::collection::vec(-3i64..4, 8),
        ) {
            let g = gl(2, 3);
            let t = dixon_table(&g, 1).unwrap();
            let phi = ClassFunction::combination(g.id(), &t.irreducibles, &a);
            let psi = ClassFunction::combination(g.id(), &t.irreducibles, &b);
            let ab = inner_product(&g, &phi, &psi).unwrap();
            prop_assert_eq!(ab.conj(), inner_product(&g, &psi, &phi).unwrap());
            let expect: i64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            prop_assert_eq!(ab, Cyclotomic::from_int(expect));
            prop_assert_eq!(decompose(&g, &phi, &t).unwrap(), a);
        }
    }
}
