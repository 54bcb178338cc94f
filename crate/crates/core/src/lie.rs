//! Groups of Lie type GL(n, q) and U(n, q) with their root data, standard
//! parabolics, duality, Gelfand–Graev characters and the checks built on
//! them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chartab::{dixon_table, CharacterTable, ChartabError};
use crate::classfun::{
    decompose, fs_indicator, induce, inner_product, is_real_valued, real_basis_decomposition,
    restrict, ClassFunction, ClassFunctionError, Truncation,
};
use crate::cyclo::Cyclotomic;
use crate::field::{prime_power, solve_norm_minus_one, Elem, FieldDescriptor, FieldError, PrimePowerField};
use crate::group::{
    center, FiniteGroup, GroupError, Matrix, MatrixSpace, Subgroup, DEFAULT_CAP, MAX_DIM,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    ClassFunction(#[from] ClassFunctionError),
    #[error(transparent)]
    Chartab(#[from] ChartabError),
    #[error("rank parameter n = {0} unsupported (1..={MAX_DIM})")]
    BadRank(usize),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("|G| = {order} exceeds the cap of {cap}")]
    TooLarge { order: u128, cap: usize },
    #[error("enumerated {found} elements, closed form gives {expected}")]
    OrderMismatch { expected: u128, found: usize },
    #[error("subset {0:?} is not stable under the twist")]
    NotRhoStable(Vec<usize>),
    #[error("Gelfand-Graev multiplicity {multiplicity} at irreducible {index}")]
    NotMultiplicityFree { index: usize, multiplicity: i64 },
    #[error("regular unipotent class is ambiguous: classes {0:?}")]
    AmbiguousRegularUnipotent(Vec<usize>),
    #[error("no torus element negates every simple root coordinate")]
    NoPrasadElement,
    #[error("s^2 is not central")]
    PrasadNotCentral,
    #[error("no non-degenerate character value for root {0}")]
    NoNondegenerateChoice(usize),
    #[error("closed-form central element is defined for the unitary family only")]
    NotUnitary,
}

pub type Result<T> = std::result::Result<T, LieError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    GL,
    U,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::GL => "GL",
            Family::U => "U",
        })
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Family::GL),
            "u" | "gu" => Ok(Family::U),
            other => Err(format!("unknown family {other:?} (expected gl or u)")),
        }
    }
}

/// `∏(qⁿ − qⁱ)` for GL, `q^{n(n−1)/2} ∏(qⁱ − (−1)ⁱ)` for U.
pub fn closed_form_order(family: Family, n: usize, q: u64) -> u128 {
    let q = q as i128;
    let n32 = n as u32;
    let v: i128 = match family {
        Family::GL => (0..n32).map(|i| q.pow(n32) - q.pow(i)).product(),
        Family::U => {
            q.pow(n32 * (n32 - 1) / 2)
                * (1..=n32)
                    .map(|i| q.pow(i) - if i % 2 == 0 { 1 } else { -1 })
                    .product::<i128>()
        }
    };
    v as u128
}

/// One coordinate per twist orbit of simple roots: the superdiagonal entry
/// `(rep, rep+1)` of elements of `N0`.
#[derive(Debug, Clone)]
pub struct RootCoordinate {
    /// Orbit representative, 1-based.
    pub root: usize,
    pub orbit: Vec<usize>,
    /// Values the coordinate takes on the root subgroup, ascending.
    pub domain: Vec<Elem>,
    /// `x(c)` for each `c` in `domain`, as a parent index: the smallest
    /// element of `N0` with coordinate `c` and zero at the other orbits.
    pub section: Vec<usize>,
}

/// A ρ-stable subset of simple roots and its number of ρ-orbits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableSubset {
    pub j: Vec<usize>,
    pub orbits: usize,
}

pub struct Parabolic {
    pub j: Vec<usize>,
    pub p: Subgroup,
    pub n: Subgroup,
    pub truncation: Truncation,
}

pub struct LieGroupData {
    pub family: Family,
    pub n: usize,
    pub q: u64,
    pub p: u32,
    pub group: FiniteGroup,
    /// Simple roots `1..n`.
    pub simple_roots: Vec<usize>,
    /// `rho[i - 1]` is the image of root `i`.
    pub rho: Vec<usize>,
    pub t0: Subgroup,
    pub b0: Subgroup,
    pub n0: Subgroup,
    pub root_coords: Vec<RootCoordinate>,
    parabolics: Mutex<BTreeMap<Vec<usize>, Arc<Parabolic>>>,
    gamma: OnceLock<ClassFunction>,
}

impl fmt::Debug for LieGroupData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

fn check_params(family: Family, n: usize, q: u64, cap: usize) -> Result<(u32, u32)> {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(LieError::BadRank(n));
    }
    let (p, k) = prime_power(q).ok_or(LieError::NotPrimePower(q))?;
    let order = closed_form_order(family, n, q);
    if order > cap as u128 {
        return Err(LieError::TooLarge { order, cap });
    }
    Ok((p, k))
}

pub fn build(family: Family, n: usize, q: u64) -> Result<LieGroupData> {
    build_capped(family, n, q, DEFAULT_CAP)
}

pub fn build_capped(family: Family, n: usize, q: u64, cap: usize) -> Result<LieGroupData> {
    match family {
        Family::GL => build_gl_capped(n, q, cap),
        Family::U => build_u_capped(n, q, cap),
    }
}

pub fn build_gl(n: usize, q: u64) -> Result<LieGroupData> {
    build_gl_capped(n, q, DEFAULT_CAP)
}

fn build_gl_capped(n: usize, q: u64, cap: usize) -> Result<LieGroupData> {
    let (p, k) = check_params(Family::GL, n, q, cap)?;
    let field = PrimePowerField::new(p, k)?;
    let space = MatrixSpace::new(&field, n)?;
    let mut gens = Vec::new();
    let mut d = vec![1; n];
    d[0] = field.generator();
    // Rank 1: the diagonal generator alone spans F_q^*.
    gens.push(space.diag(&d));
    // F_p-basis of F_q: the powers of the polynomial variable.
    for j in 0..k {
        let c = field.from_digits(&(0..k).map(|i| (i == j) as u32).collect::<Vec<_>>());
        for i in 0..n - 1 {
            for (a, b) in [(i, i + 1), (i + 1, i)] {
                let mut m = space.identity();
                m.set(a, b, c);
                gens.push(m);
            }
        }
    }
    let group = FiniteGroup::generate(&space, &gens, cap)?;
    finish(Family::GL, n, q, p, group)
}

pub fn build_u(n: usize, q: u64) -> Result<LieGroupData> {
    build_u_capped(n, q, DEFAULT_CAP)
}

fn build_u_capped(n: usize, q: u64, cap: usize) -> Result<LieGroupData> {
    let (p, k) = check_params(Family::U, n, q, cap)?;
    let field = PrimePowerField::new(p, 2 * k)?;
    let space = MatrixSpace::new(&field, n)?;
    let elements = unitary_elements(&space, k);
    let group = FiniteGroup::from_elements(&space, &elements)?;
    finish(Family::U, n, q, p, group)
}

/// `x ↦ x^q` on `F_{q²}`, where `q = p^k`.
fn bar(field: &PrimePowerField, k: u32, x: Elem) -> Elem {
    field.frobenius_power(x, k)
}

/// `Σ_i conj(x_i) y_{n−1−i}`: the Hermitian form with antidiagonal Gram matrix.
fn hermitian(field: &PrimePowerField, k: u32, x: &[Elem], y: &[Elem]) -> Elem {
    let n = x.len();
    (0..n).fold(0, |acc, i| {
        field.add(acc, field.mul(bar(field, k, x[i]), y[n - 1 - i]))
    })
}

/// All `g` with `conj(g)ᵀ J g = J`, found column by column.
fn unitary_elements(space: &MatrixSpace, k: u32) -> Vec<Matrix> {
    let field = space.field();
    let n = space.dim();
    let qq = field.order() as usize;
    let vectors: Vec<Vec<Elem>> = (0..qq.pow(n as u32))
        .map(|mut code| {
            let mut v = vec![0; n];
            for x in v.iter_mut().rev() {
                *x = (code % qq) as Elem;
                code /= qq;
            }
            v
        })
        .collect();
    let gram = |a: usize, b: usize| -> Elem { (a + b == n - 1) as Elem };
    let mut out = Vec::new();
    let mut cols: Vec<usize> = Vec::with_capacity(n);
    fn extend(
        cols: &mut Vec<usize>,
        vectors: &[Vec<Elem>],
        ok: &dyn Fn(&[usize], usize) -> bool,
        n: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cols.len() == n {
            out.push(cols.clone());
            return;
        }
        for v in 0..vectors.len() {
            if ok(cols, v) {
                cols.push(v);
                extend(cols, vectors, ok, n, out);
                cols.pop();
            }
        }
    }
    let ok = |cols: &[usize], v: usize| -> bool {
        let b = cols.len();
        let y = &vectors[v];
        if hermitian(field, k, y, y) != gram(b, b) {
            return false;
        }
        cols.iter()
            .enumerate()
            .all(|(a, &c)| hermitian(field, k, &vectors[c], y) == gram(a, b))
    };
    let mut found = Vec::new();
    extend(&mut cols, &vectors, &ok, n, &mut found);
    for cs in found {
        let mut m = space.zero();
        for (b, &c) in cs.iter().enumerate() {
            for a in 0..n {
                m.set(a, b, vectors[c][a]);
            }
        }
        out.push(m);
    }
    out
}

/// The Frobenius map `g ↦ J conj(g)^{-T} J` on `GL(n, q²)`.
pub fn unitary_frobenius(space: &MatrixSpace, k: u32, g: &Matrix) -> Matrix {
    let field = space.field();
    let n = space.dim();
    let gb = space.map_entries(g, |x| bar(field, k, x));
    let inv_t = space.transpose(&space.inverse(&gb).expect("invertible"));
    let mut out = space.zero();
    for a in 0..n {
        for b in 0..n {
            out.set(a, b, inv_t.get(n - 1 - a, n - 1 - b));
        }
    }
    out
}

fn finish(family: Family, n: usize, q: u64, p: u32, group: FiniteGroup) -> Result<LieGroupData> {
    let expected = closed_form_order(family, n, q);
    if group.order() as u128 != expected {
        return Err(LieError::OrderMismatch {
            expected,
            found: group.order(),
        });
    }
    let simple_roots: Vec<usize> = (1..n).collect();
    let rho = simple_roots
        .iter()
        .map(|&i| match family {
            Family::GL => i,
            Family::U => n - i,
        })
        .collect();
    let t0 = Subgroup::from_predicate(&group, |m| m.is_diagonal())?;
    let b0 = Subgroup::from_predicate(&group, |m| lower_zero(m, n))?;
    let n0 = Subgroup::from_predicate(&group, |m| lower_zero(m, n) && unit_diagonal(m, n))?;
    let mut data = LieGroupData {
        family,
        n,
        q,
        p,
        group,
        simple_roots,
        rho,
        t0,
        b0,
        n0,
        root_coords: Vec::new(),
        parabolics: Mutex::new(BTreeMap::new()),
        gamma: OnceLock::new(),
    };
    data.root_coords = data.compute_root_coords();
    Ok(data)
}

fn lower_zero(m: &Matrix, n: usize) -> bool {
    (0..n).all(|a| (0..a).all(|b| m.get(a, b) == 0))
}

fn unit_diagonal(m: &Matrix, n: usize) -> bool {
    (0..n).all(|a| m.get(a, a) == 1)
}

impl LieGroupData {
    pub fn name(&self) -> String {
        format!("{}({},{})", self.family, self.n, self.q)
    }

    pub fn field(&self) -> &Arc<PrimePowerField> {
        self.group.field()
    }

    pub fn field_descriptor(&self) -> FieldDescriptor {
        self.field().descriptor()
    }

    /// Degree of `F_q` over `F_p`.
    fn k(&self) -> u32 {
        match self.family {
            Family::GL => self.field().degree(),
            Family::U => self.field().degree() / 2,
        }
    }

    /// `p`-part of `|G|`.
    pub fn p_part(&self) -> u64 {
        let mut o = self.group.order() as u64;
        let mut r = 1;
        while o.is_multiple_of(self.p as u64) {
            o /= self.p as u64;
            r *= self.p as u64;
        }
        r
    }

    pub fn frobenius(&self, g: &Matrix) -> Matrix {
        let space = self.group.space();
        match self.family {
            Family::GL => space.map_entries(g, |x| self.field().frobenius_power(x, self.k())),
            Family::U => unitary_frobenius(space, self.k(), g),
        }
    }

    /// Orbit representatives of the twist on simple roots.
    pub fn orbit_reps(&self) -> Vec<usize> {
        self.simple_roots
            .iter()
            .copied()
            .filter(|&i| i <= self.rho[i - 1])
            .collect()
    }

    /// Superdiagonal entries `u_{i,i+1}` for `i = 1..n`.
    pub fn coordinates(&self, u: &Matrix) -> Vec<Elem> {
        (0..self.n - 1).map(|i| u.get(i, i + 1)).collect()
    }

    fn compute_root_coords(&self) -> Vec<RootCoordinate> {
        let reps = self.orbit_reps();
        reps.iter()
            .map(|&i| {
                let mut section: BTreeMap<Elem, usize> = BTreeMap::new();
                for &u in &self.n0.embedding {
                    let c = self.coordinates(self.group.element(u));
                    if reps.iter().all(|&j| j == i || c[j - 1] == 0) {
                        section.entry(c[i - 1]).or_insert(u);
                    }
                }
                let orbit = if self.rho[i - 1] == i {
                    vec![i]
                } else {
                    vec![i, self.rho[i - 1]]
                };
                RootCoordinate {
                    root: i,
                    orbit,
                    domain: section.keys().copied().collect(),
                    section: section.values().copied().collect(),
                }
            })
            .collect()
    }

    /// All `J ⊆ I` with `ρ(J) = J`, ordered by bitmask.
    pub fn rho_stable_subsets(&self) -> Vec<StableSubset> {
        let r = self.simple_roots.len();
        (0u32..1 << r)
            .filter_map(|mask| {
                let j: Vec<usize> = (1..=r).filter(|i| mask >> (i - 1) & 1 == 1).collect();
                if !j.iter().all(|&i| j.contains(&self.rho[i - 1])) {
                    return None;
                }
                let orbits = j.iter().filter(|&&i| i <= self.rho[i - 1]).count();
                Some(StableSubset { j, orbits })
            })
            .collect()
    }

    /// Block index of each matrix position for the composition cut at roots
    /// outside `j`.
    fn blocks(&self, j: &[usize]) -> Vec<usize> {
        (0..self.n)
            .map(|a| (1..=a).filter(|i| !j.contains(i)).count())
            .collect()
    }

    /// `(P_J, N_J)` with the truncation data for the pair; cached.
    pub fn standard_parabolic(&self, j: &[usize]) -> Result<Arc<Parabolic>> {
        let mut j = j.to_vec();
        j.sort_unstable();
        j.dedup();
        if !j.iter().all(|&i| (1..self.n).contains(&i) && j.contains(&self.rho[i - 1])) {
            return Err(LieError::NotRhoStable(j));
        }
        if let Some(p) = self.parabolics.lock().unwrap().get(&j) {
            return Ok(Arc::clone(p));
        }
        let blk = self.blocks(&j);
        let n = self.n;
        let in_p = |m: &Matrix| {
            (0..n).all(|a| (0..n).all(|b| blk[a] <= blk[b] || m.get(a, b) == 0))
        };
        let p = Subgroup::from_predicate(&self.group, in_p)?;
        let nj = Subgroup::from_predicate(&self.group, |m| {
            in_p(m)
                && (0..n).all(|a| {
                    (0..n).all(|b| blk[a] != blk[b] || m.get(a, b) == (a == b) as Elem)
                })
        })?;
        let truncation = Truncation::new(&self.group, &p, &nj)?;
        let par = Arc::new(Parabolic {
            j: j.clone(),
            p,
            n: nj,
            truncation,
        });
        self.parabolics
            .lock()
            .unwrap()
            .insert(j, Arc::clone(&par));
        Ok(par)
    }

    pub fn parabolics(&self) -> Result<Vec<(StableSubset, Arc<Parabolic>)>> {
        self.rho_stable_subsets()
            .into_iter()
            .map(|s| {
                let p = self.standard_parabolic(&s.j)?;
                Ok((s, p))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityResult {
    pub virtual_char: ClassFunction,
    pub sign: i8,
    pub normalized: ClassFunction,
}

/// `χ* = Σ_{ρ-stable J} (−1)^{|J/ρ|} Ind_{P_J}^G(T_{P_J/N_J}(χ))`.
pub fn duality(data: &LieGroupData, chi: &ClassFunction) -> Result<DualityResult> {
    let g = &data.group;
    chi.check_group(g.id())?;
    let mut acc = ClassFunction::zero(g);
    for (s, par) in data.parabolics()? {
        let t = par.truncation.apply(chi)?;
        let ind = induce(g, &par.p, &t)?;
        acc = if s.orbits % 2 == 0 {
            acc.add(&ind)?
        } else {
            acc.sub(&ind)?
        };
    }
    let negative = acc
        .degree()
        .as_rational()
        .is_some_and(|d| d.is_negative());
    let sign = if negative { -1 } else { 1 };
    let normalized = if negative { acc.neg() } else { acc.clone() };
    Ok(DualityResult {
        virtual_char: acc,
        sign,
        normalized,
    })
}

/// For every orbit coordinate, the values `a` for which `c ↦ ζ_p^{Tr(a c)}`
/// is nontrivial on the coordinate's domain, ascending.
pub fn nondegenerate_values(data: &LieGroupData) -> Vec<Vec<Elem>> {
    let f = data.field();
    data.root_coords
        .iter()
        .map(|rc| {
            f.elements()
                .filter(|&a| rc.domain.iter().any(|&c| f.trace_to_prime(f.mul(a, c)) != 0))
                .collect()
        })
        .collect()
}

/// The default choice (smallest value per orbit) and, when one exists, a
/// second choice differing at the first orbit.
pub fn nondegenerate_choices(data: &LieGroupData) -> Result<Vec<Vec<Elem>>> {
    let vals = nondegenerate_values(data);
    for (v, rc) in vals.iter().zip(&data.root_coords) {
        if v.is_empty() {
            return Err(LieError::NoNondegenerateChoice(rc.root));
        }
    }
    let first: Vec<Elem> = vals.iter().map(|v| v[0]).collect();
    let mut out = vec![first.clone()];
    if let Some(&alt) = vals.first().and_then(|v| v.get(1)) {
        let mut second = first;
        second[0] = alt;
        out.push(second);
    }
    Ok(out)
}

/// `λ(u) = ζ_p^{Σ Tr(a_i u_{i,i+1})}` over orbit representatives, as a class
/// function on `N0`.
pub fn nondegenerate_character(data: &LieGroupData, a: &[Elem]) -> ClassFunction {
    let f = data.field();
    let p = data.p;
    let n0 = &data.n0.group;
    let values = n0
        .classes()
        .reps
        .iter()
        .map(|&r| {
            let c = data.coordinates(n0.element(r));
            let e = data
                .root_coords
                .iter()
                .zip(a)
                .map(|(rc, &ai)| f.trace_to_prime(f.mul(ai, c[rc.root - 1])))
                .fold(0, |acc, t| (acc + t) % p);
            Cyclotomic::root_of_unity(p, e as i64)
        })
        .collect();
    ClassFunction::new(n0.id(), values)
}

pub fn gelfand_graev_with(data: &LieGroupData, a: &[Elem]) -> Result<ClassFunction> {
    let lambda = nondegenerate_character(data, a);
    Ok(induce(&data.group, &data.n0, &lambda)?)
}

/// `Γ = Ind_{N0}^G λ` for the default non-degenerate `λ`; cached.
pub fn gelfand_graev(data: &LieGroupData) -> Result<ClassFunction> {
    if let Some(g) = data.gamma.get() {
        return Ok(g.clone());
    }
    let choices = nondegenerate_choices(data)?;
    let gamma = gelfand_graev_with(data, &choices[0])?;
    Ok(data.gamma.get_or_init(|| gamma).clone())
}

/// Indices of irreducibles occurring in `Γ`; fails unless every multiplicity
/// is 0 or 1.
pub fn regular_characters(data: &LieGroupData, table: &CharacterTable) -> Result<Vec<usize>> {
    let gamma = gelfand_graev(data)?;
    let mult = decompose(&data.group, &gamma, table)?;
    if let Some((index, &m)) = mult.iter().enumerate().find(|(_, &m)| !(0..=1).contains(&m)) {
        return Err(LieError::NotMultiplicityFree {
            index,
            multiplicity: m,
        });
    }
    Ok((0..mult.len()).filter(|&i| mult[i] == 1).collect())
}

/// Semisimple characters by `⟨Γ*, χ⟩ ≠ 0`, with the two cross-checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemisimpleClassification {
    pub by_dual_gamma: Vec<bool>,
    pub by_degree: Vec<bool>,
    pub by_unipotent_value: Vec<bool>,
    /// Irreducibles on which the three criteria disagree.
    pub disagreements: Vec<usize>,
}

impl SemisimpleClassification {
    pub fn indices(&self) -> Vec<usize> {
        (0..self.by_dual_gamma.len())
            .filter(|&i| self.by_dual_gamma[i])
            .collect()
    }
}

pub fn semisimple_characters(
    data: &LieGroupData,
    table: &CharacterTable,
) -> Result<SemisimpleClassification> {
    let g = &data.group;
    let xi = duality(data, &gelfand_graev(data)?)?.virtual_char;
    let by_dual_gamma: Vec<bool> = table
        .irreducibles
        .par_iter()
        .map(|chi| Ok(!inner_product(g, &xi, chi)?.is_zero()))
        .collect::<Result<_>>()?;
    let by_degree = table
        .degrees
        .iter()
        .map(|d| d % data.p as u64 != 0)
        .collect::<Vec<_>>();
    let u = regular_unipotent_class(data)?;
    let by_unipotent_value = table
        .irreducibles
        .iter()
        .map(|chi| !chi.values[u].is_zero())
        .collect::<Vec<_>>();
    let disagreements = (0..table.len())
        .filter(|&i| by_dual_gamma[i] != by_degree[i] || by_dual_gamma[i] != by_unipotent_value[i])
        .collect();
    Ok(SemisimpleClassification {
        by_dual_gamma,
        by_degree,
        by_unipotent_value,
        disagreements,
    })
}

/// The class of `p`-power order with the smallest centralizer.
pub fn regular_unipotent_class(data: &LieGroupData) -> Result<usize> {
    let cd = data.group.classes();
    let p = data.p as u64;
    let is_p_power = |mut o: u64| {
        while o.is_multiple_of(p) {
            o /= p;
        }
        o == 1
    };
    let unipotent: Vec<usize> = (0..cd.num_classes())
        .filter(|&c| is_p_power(cd.rep_orders[c]))
        .collect();
    let min = unipotent
        .iter()
        .map(|&c| cd.centralizer_orders[c])
        .min()
        .expect("identity class is unipotent");
    let minimal: Vec<usize> = unipotent
        .into_iter()
        .filter(|&c| cd.centralizer_orders[c] == min)
        .collect();
    match minimal.as_slice() {
        [c] => Ok(*c),
        _ => Err(LieError::AmbiguousRegularUnipotent(minimal)),
    }
}

/// Average of `χ` over the regular unipotent elements.
pub fn regular_unipotent_average(data: &LieGroupData, chi: &ClassFunction) -> Result<Cyclotomic> {
    chi.check_group(data.group.id())?;
    Ok(chi.values[regular_unipotent_class(data)?].clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrasadElement {
    /// Parent index of `s ∈ T0`.
    pub s: usize,
    /// Parent index of `z = s²`.
    pub z: usize,
}

/// Whether conjugation by `s` negates every simple-root coordinate of every
/// element of `N0`.
pub fn negates_simple_roots(data: &LieGroupData, s: usize) -> bool {
    let g = &data.group;
    let f = data.field();
    data.n0.embedding.iter().all(|&u| {
        let before = data.coordinates(g.element(u));
        let after = data.coordinates(g.element(g.conjugate(s, u)));
        before.iter().zip(&after).all(|(&b, &a)| a == f.neg(b))
    })
}

/// The first `s ∈ T0` in element order negating all simple-root
/// coordinates; the identity in characteristic 2.
pub fn prasad_element(data: &LieGroupData) -> Result<PrasadElement> {
    let g = &data.group;
    let s = if data.p == 2 {
        g.identity()
    } else {
        *data
            .t0
            .embedding
            .iter()
            .find(|&&s| negates_simple_roots(data, s))
            .ok_or(LieError::NoPrasadElement)?
    };
    let z = g.mul(s, s);
    if g.classes().sizes[g.classes().class_of[z]] != 1 {
        return Err(LieError::PrasadNotCentral);
    }
    Ok(PrasadElement { s, z })
}

/// The scalar `z` for `U(n, q)`: `I` if `n` is odd or `q` even, `−I` if
/// `q ≡ 1 (mod 4)`, else `t² I` with `t` the smallest solution of
/// `t^{q+1} = −1` in `F_{q²}`.
pub fn central_element_z(family: Family, n: usize, q: u64) -> Result<Matrix> {
    if family != Family::U {
        return Err(LieError::NotUnitary);
    }
    let (p, k) = prime_power(q).ok_or(LieError::NotPrimePower(q))?;
    let field = PrimePowerField::new(p, 2 * k)?;
    let space = MatrixSpace::new(&field, n)?;
    let scalar = if n % 2 == 1 || q.is_multiple_of(2) {
        1
    } else if q % 4 == 1 {
        field.neg(1)
    } else {
        let t = solve_norm_minus_one(q)?;
        field.mul(t.repr, t.repr)
    };
    Ok(space.scalar(scalar))
}

/// Which verification family a check belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    FsDual,
    CentralDual,
    FsCentral,
    Unitary,
    All,
}

impl FromStr for Theorem {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "fs-dual" => Theorem::FsDual,
            "central-dual" => Theorem::CentralDual,
            "fs-central" => Theorem::FsCentral,
            "unitary" => Theorem::Unitary,
            "all" => Theorem::All,
            other => return Err(format!("unknown theorem {other:?}")),
        })
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::FsDual => "fs-dual",
            Theorem::CentralDual => "central-dual",
            Theorem::FsCentral => "fs-central",
            Theorem::Unitary => "unitary",
            Theorem::All => "all",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    DualityInvolution,
    Isometry,
    DualOfTrivial,
    FsPreservation,
    CentralPreservation,
    GammaDegree,
    GammaMultiplicity,
    GammaChoice,
    SemisimpleCriteria,
    DualityBijection,
    RealCounts,
    PrasadCentral,
    FsCentral,
    PrasadClosedForm,
    Unitary,
    InvolutionCount,
    Truncation,
}

impl CheckKind {
    pub fn theorem(self) -> Theorem {
        use CheckKind::*;
        match self {
            DualityInvolution | Isometry | DualOfTrivial | FsPreservation => Theorem::FsDual,
            CentralPreservation => Theorem::CentralDual,
            GammaDegree | GammaMultiplicity | GammaChoice | SemisimpleCriteria
            | DualityBijection | RealCounts | PrasadCentral | FsCentral => Theorem::FsCentral,
            PrasadClosedForm | Unitary => Theorem::Unitary,
            InvolutionCount | Truncation => Theorem::All,
        }
    }

    pub fn selected_by(self, t: Theorem) -> bool {
        t == Theorem::All || self.theorem() == t
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: CheckKind,
    /// Witness irreducible, for per-character checks.
    pub character: Option<usize>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub index: usize,
    pub degree: u64,
    pub epsilon: i8,
    pub omega_z: String,
    pub regular: bool,
    pub semisimple: bool,
    pub real: bool,
    pub dual_index: Option<usize>,
    pub dual_sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub family: Family,
    pub n: usize,
    pub q: u64,
    pub group_order: u64,
    pub num_classes: usize,
    pub field: FieldDescriptor,
    /// `z = s²` as rows of field-element encodings.
    pub z: Vec<Vec<Elem>>,
    /// `identity`, `minus-identity` or `other`.
    pub z_kind: String,
    pub s: Vec<Vec<Elem>>,
    pub seed: u64,
    pub prime: u64,
    pub characters: Vec<CharacterRecord>,
    pub checks: Vec<CheckRecord>,
}

impl TheoremReport {
    pub fn failures(&self, theorem: Theorem) -> Vec<&CheckRecord> {
        self.checks
            .iter()
            .filter(|c| c.check.selected_by(theorem) && !c.passed)
            .collect()
    }

    pub fn passed(&self, theorem: Theorem) -> bool {
        self.failures(theorem).is_empty()
    }

    /// Copy keeping only checks selected by `theorem`.
    pub fn select(&self, theorem: Theorem) -> TheoremReport {
        let mut r = self.clone();
        r.checks.retain(|c| c.check.selected_by(theorem));
        r
    }
}

fn record(check: CheckKind, character: Option<usize>, passed: bool, detail: String) -> CheckRecord {
    CheckRecord {
        check,
        character,
        passed,
        detail,
    }
}

/// Truncation along one `(P_J, N_J)` against restriction followed by
/// projection onto the `N_J`-trivial irreducibles of `P_J`; orthogonal
/// characters must truncate to characters of real representations.
pub fn truncation_checks(
    data: &LieGroupData,
    table: &CharacterTable,
    seed: u64,
) -> Result<Vec<CheckRecord>> {
    let g = &data.group;
    let mut out = Vec::new();
    for (s, par) in data.parabolics()? {
        let p = &par.p.group;
        let ptable = if p.id() == g.id() {
            table.clone()
        } else {
            dixon_table(p, seed)?
        };
        let pcd = p.classes();
        let trivial_on_n: Vec<bool> = ptable
            .irreducibles
            .iter()
            .map(|psi| {
                par.n.embedding.iter().all(|&x| {
                    let xi = par.p.embedding.binary_search(&x).expect("N_J inside P_J");
                    psi.values[pcd.class_of[xi]] == *psi.degree()
                })
            })
            .collect();
        let recs: Vec<CheckRecord> = table
            .irreducibles
            .par_iter()
            .enumerate()
            .map(|(i, chi)| {
                let fast = par.truncation.apply(chi)?;
                let res = restrict(g, &par.p, chi)?;
                let mult = decompose(p, &res, &ptable)?;
                let coeffs: Vec<i64> = mult
                    .iter()
                    .zip(&trivial_on_n)
                    .map(|(&m, &t)| if t { m } else { 0 })
                    .collect();
                let proj = ClassFunction::combination(p.id(), &ptable.irreducibles, &coeffs);
                let mut passed = fast == proj;
                let mut detail = format!("J={:?}", s.j);
                if passed && table.indicators[i] == 1 {
                    if let Err(e) = real_basis_decomposition(p, &fast, &ptable) {
                        passed = false;
                        detail.push_str(&format!(": {e}"));
                    }
                } else if !passed {
                    detail.push_str(": truncation differs from projection");
                }
                Ok(record(CheckKind::Truncation, Some(i), passed, detail))
            })
            .collect::<Result<_>>()?;
        out.extend(recs);
    }
    Ok(out)
}

/// Every theorem check on one group, with per-character records sorted by
/// character index.
pub fn verify_theorems(data: &LieGroupData, table: &CharacterTable) -> Result<TheoremReport> {
    let g = &data.group;
    let cd = g.classes();
    let r = table.len();
    let mut checks = Vec::new();

    let duals: Vec<DualityResult> = table
        .irreducibles
        .par_iter()
        .map(|chi| duality(data, chi))
        .collect::<Result<_>>()?;
    let dual_index: Vec<Option<usize>> = duals.iter().map(|d| table.index_of(&d.normalized)).collect();

    let triv = table.trivial_index();
    let st = &duals[triv];
    checks.push(record(
        CheckKind::DualOfTrivial,
        Some(triv),
        st.sign == 1 && st.normalized.degree().as_i64() == Some(data.p_part() as i64),
        format!("sign {}, degree {}, |G|_p = {}", st.sign, st.normalized.degree(), data.p_part()),
    ));

    let per_char: Vec<Vec<CheckRecord>> = (0..r)
        .into_par_iter()
        .map(|i| {
            let chi = &table.irreducibles[i];
            let d = &duals[i];
            let mut recs = Vec::new();
            let back = duality(data, &d.normalized)?;
            recs.push(record(
                CheckKind::DualityInvolution,
                Some(i),
                back.normalized == *chi,
                format!("dual is irreducible {:?} with sign {}", dual_index[i], d.sign),
            ));
            let bad: Vec<usize> = (0..r)
                .filter(|&j| {
                    let ip = inner_product(g, &d.virtual_char, &duals[j].virtual_char);
                    !matches!(ip, Ok(v) if v == Cyclotomic::from_int((i == j) as i64))
                })
                .collect();
            recs.push(record(
                CheckKind::Isometry,
                Some(i),
                bad.is_empty(),
                if bad.is_empty() {
                    String::new()
                } else {
                    format!("fails against {bad:?}")
                },
            ));
            let eps_dual = fs_indicator(g, &d.normalized)?;
            recs.push(record(
                CheckKind::FsPreservation,
                Some(i),
                eps_dual == Cyclotomic::from_int(table.indicators[i] as i64),
                format!("eps = {}, eps of dual = {}", table.indicators[i], eps_dual),
            ));
            let bad_z: Vec<usize> = center(g)
                .into_iter()
                .filter(|&z| {
                    let c = cd.class_of[z];
                    let a = chi.values[c].div_int(table.degrees[i] as i64);
                    let b = match d.normalized.degree().as_i64() {
                        Some(deg) if deg != 0 => d.normalized.values[c].div_int(deg),
                        _ => return true,
                    };
                    a != b
                })
                .collect();
            recs.push(record(
                CheckKind::CentralPreservation,
                Some(i),
                bad_z.is_empty(),
                if bad_z.is_empty() {
                    String::new()
                } else {
                    format!("differs at central elements {bad_z:?}")
                },
            ));
            Ok(recs)
        })
        .collect::<Result<_>>()?;

    let gamma = gelfand_graev(data)?;
    let gamma_mult = decompose(g, &gamma, table)?;
    let index = (g.order() / data.n0.order()) as i64;
    checks.push(record(
        CheckKind::GammaDegree,
        None,
        gamma.degree().as_i64() == Some(index),
        format!("degree {}, [G:N0] = {index}", gamma.degree()),
    ));
    let choices = nondegenerate_choices(data)?;
    if let Some(second) = choices.get(1) {
        let other = gelfand_graev_with(data, second)?;
        checks.push(record(
            CheckKind::GammaChoice,
            None,
            other == gamma,
            format!("choices {:?} and {:?}", choices[0], second),
        ));
    }
    let regular: Vec<bool> = gamma_mult.iter().map(|&m| m != 0).collect();
    let ss = semisimple_characters(data, table)?;
    let semisimple = ss.by_dual_gamma.clone();

    let ps = prasad_element(data)?;
    checks.push(record(
        CheckKind::PrasadCentral,
        None,
        true,
        format!("s = {:?}", g.element(ps.s).rows()),
    ));
    let z_class = cd.class_of[ps.z];
    let omega_z: Vec<Cyclotomic> = (0..r)
        .map(|i| table.irreducibles[i].values[z_class].div_int(table.degrees[i] as i64))
        .collect();
    let closed = match data.family {
        Family::U => {
            let m = central_element_z(data.family, data.n, data.q)?;
            let idx = g.index_of(&m).ok_or(GroupError::NotAnElement)?;
            checks.push(record(
                CheckKind::PrasadClosedForm,
                None,
                idx == ps.z && (data.q % 2 == 1 || ps.s == g.identity()),
                format!("s^2 = {:?}, closed form {:?}", g.element(ps.z).rows(), m.rows()),
            ));
            Some(cd.class_of[idx])
        }
        Family::GL => None,
    };

    let mut counts = [[0usize; 2]; 2];
    for (i, mut recs) in per_char.into_iter().enumerate() {
        let chi = &table.irreducibles[i];
        let eps = table.indicators[i];
        recs.push(record(
            CheckKind::GammaMultiplicity,
            Some(i),
            (0..=1).contains(&gamma_mult[i]),
            format!("multiplicity {}", gamma_mult[i]),
        ));
        recs.push(record(
            CheckKind::SemisimpleCriteria,
            Some(i),
            !ss.disagreements.contains(&i),
            format!(
                "dual-gamma {}, degree {}, unipotent value {}",
                ss.by_dual_gamma[i], ss.by_degree[i], ss.by_unipotent_value[i]
            ),
        ));
        let d = dual_index[i];
        let bij = match d {
            Some(j) => (!regular[i] || semisimple[j]) && (!semisimple[i] || regular[j]),
            None => false,
        };
        recs.push(record(
            CheckKind::DualityBijection,
            Some(i),
            bij,
            format!("dual index {d:?}"),
        ));
        let real = is_real_valued(chi);
        if real && (regular[i] || semisimple[i]) {
            let want = Cyclotomic::from_int(eps as i64);
            recs.push(record(
                CheckKind::FsCentral,
                Some(i),
                omega_z[i] == want,
                format!("eps = {eps}, omega(z) = {}", omega_z[i]),
            ));
            if let Some(c) = closed {
                let w = chi.values[c].div_int(table.degrees[i] as i64);
                recs.push(record(
                    CheckKind::Unitary,
                    Some(i),
                    w == want,
                    format!("eps = {eps}, omega(z) = {w}"),
                ));
            }
        }
        if eps != 0 {
            let slot = (eps == -1) as usize;
            counts[0][slot] += regular[i] as usize;
            counts[1][slot] += semisimple[i] as usize;
        }
        checks.extend(recs);
    }
    let n_reg = regular.iter().filter(|&&b| b).count();
    let n_ss = semisimple.iter().filter(|&&b| b).count();
    checks.push(record(
        CheckKind::RealCounts,
        None,
        counts[0] == counts[1] && n_reg == n_ss,
        format!(
            "regular {n_reg} (orthogonal {}, symplectic {}), semisimple {n_ss} (orthogonal {}, symplectic {})",
            counts[0][0], counts[0][1], counts[1][0], counts[1][1]
        ),
    ));

    let lhs: i64 = (0..r)
        .map(|i| table.indicators[i] as i64 * table.degrees[i] as i64)
        .sum();
    let id = g.identity();
    let involutions = (0..g.order()).filter(|&x| g.mul(x, x) == id).count() as i64;
    checks.push(record(
        CheckKind::InvolutionCount,
        None,
        lhs == involutions,
        format!("sum eps*deg = {lhs}, #(g^2 = 1) = {involutions}"),
    ));
    checks.extend(truncation_checks(data, table, table.seed)?);

    checks.sort_by_key(|c| (c.check, c.character));

    let characters = (0..r)
        .map(|i| CharacterRecord {
            index: i,
            degree: table.degrees[i],
            epsilon: table.indicators[i],
            omega_z: omega_z[i].to_string(),
            regular: regular[i],
            semisimple: semisimple[i],
            real: is_real_valued(&table.irreducibles[i]),
            dual_index: dual_index[i],
            dual_sign: duals[i].sign,
        })
        .collect();
    let zm = g.element(ps.z);
    let field = data.field();
    let z_kind = if ps.z == id {
        "identity"
    } else if *zm == g.space().scalar(field.neg(1)) {
        "minus-identity"
    } else {
        "other"
    };
    Ok(TheoremReport {
        family: data.family,
        n: data.n,
        q: data.q,
        group_order: g.order() as u64,
        num_classes: cd.num_classes(),
        field: data.field_descriptor(),
        z: zm.rows(),
        z_kind: z_kind.to_string(),
        s: g.element(ps.s).rows(),
        seed: table.seed,
        prime: table.prime,
        characters,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::orthogonality_check;

    fn gl(n: usize, q: u64) -> LieGroupData {
        build_gl(n, q).unwrap()
    }

    fn u(n: usize, q: u64) -> LieGroupData {
        build_u(n, q).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_order(Family::GL, 2, 2), 6);
        assert_eq!(closed_form_order(Family::GL, 3, 2), 168);
        assert_eq!(closed_form_order(Family::U, 2, 2), 18);
        assert_eq!(closed_form_order(Family::U, 3, 2), 648);
        assert_eq!(closed_form_order(Family::U, 3, 3), 24192);
        assert!(matches!(
            build_capped(Family::U, 3, 4, 100_000),
            Err(LieError::TooLarge { .. })
        ));
    }

    #[test]
    fn small_builds() {
        let g = gl(2, 3);
        assert_eq!(g.group.order(), 48);
        assert_eq!(g.group.classes().num_classes(), 8);
        assert_eq!(gl(2, 2).group.order(), 6);
        assert_eq!(gl(3, 2).group.order(), 168);
        assert_eq!(u(2, 2).group.order(), 18);
        assert_eq!(u(2, 3).group.order(), 96);
    }

    #[test]
    fn gl_matches_brute_enumeration() {
        let g = gl(2, 4);
        let space = g.group.space();
        let brute = (0..4u128.pow(4))
            .map(|k| space.from_key(k))
            .filter(|m| space.det(m) != 0)
            .count();
        assert_eq!(g.group.order(), brute);
    }

    #[test]
    fn unitary_structure() {
        for (n, q) in [(2, 2), (2, 3), (3, 2)] {
            let d = u(n, q);
            let g = &d.group;
            let f = d.field();
            for m in g.elements() {
                assert_eq!(d.frobenius(m), *m);
            }
            for &b in &d.b0.embedding {
                assert!(d.b0.contains(g.index_of(&d.frobenius(g.element(b))).unwrap()));
            }
            let z = center(g);
            let scalars: Vec<Elem> = f
                .elements()
                .filter(|&a| a != 0 && f.pow(a, q as i64 + 1) == 1)
                .collect();
            assert_eq!(z.len(), scalars.len());
            for a in scalars {
                assert!(z.contains(&g.index_of(&g.space().scalar(a)).unwrap()));
            }
        }
    }

    #[test]
    fn gl_center_is_scalars() {
        let d = gl(2, 5);
        let z = center(&d.group);
        assert_eq!(z.len(), 4);
        for &i in &z {
            let m = d.group.element(i);
            assert!(m.is_diagonal() && m.get(0, 0) == m.get(1, 1));
        }
    }

    #[test]
    fn stable_subsets() {
        let sets = |d: &LieGroupData| -> Vec<(Vec<usize>, usize)> {
            d.rho_stable_subsets().into_iter().map(|s| (s.j, s.orbits)).collect()
        };
        assert_eq!(
            sets(&gl(3, 2)),
            vec![(vec![], 0), (vec![1], 1), (vec![2], 1), (vec![1, 2], 2)]
        );
        assert_eq!(sets(&u(3, 2)), vec![(vec![], 0), (vec![1, 2], 1)]);
        assert_eq!(sets(&u(2, 2)), vec![(vec![], 0), (vec![1], 1)]);
        assert!(matches!(
            u(3, 2).standard_parabolic(&[1]),
            Err(LieError::NotRhoStable(_))
        ));
    }

    #[test]
    fn parabolics() {
        let d = gl(3, 2);
        let full = d.standard_parabolic(&[1, 2]).unwrap();
        assert_eq!(full.p.order(), 168);
        assert_eq!(full.n.order(), 1);
        let borel = d.standard_parabolic(&[]).unwrap();
        assert_eq!(borel.p.group.id(), d.b0.group.id());
        assert_eq!(borel.n.group.id(), d.n0.group.id());
        let p1 = d.standard_parabolic(&[1]).unwrap();
        assert_eq!(p1.p.order(), 24);
        assert_eq!(d.group.order() / p1.p.order(), 7);
        for dd in [gl(2, 3), u(3, 2)] {
            let z = center(&dd.group);
            for (_, par) in dd.parabolics().unwrap() {
                assert!(z.iter().all(|&x| par.p.contains(x)));
            }
        }
    }

    #[test]
    fn duality_examples() {
        let d = gl(2, 2);
        let t = dixon_table(&d.group, 1).unwrap();
        let triv = ClassFunction::trivial(&d.group);
        let st = duality(&d, &triv).unwrap();
        assert_eq!(st.sign, 1);
        let ind = induce(&d.group, &d.b0, &ClassFunction::trivial(&d.b0.group)).unwrap();
        assert_eq!(st.virtual_char, ind.sub(&triv).unwrap());
        assert_eq!(st.normalized, t.irreducibles[2]);

        let d = gl(2, 3);
        let t = dixon_table(&d.group, 1).unwrap();
        let st = duality(&d, &ClassFunction::trivial(&d.group)).unwrap();
        assert_eq!(st.normalized.degree().as_i64(), Some(3));
        for chi in &t.irreducibles {
            let once = duality(&d, chi).unwrap();
            assert!(t.index_of(&once.normalized).is_some());
            assert_eq!(&duality(&d, &once.normalized).unwrap().normalized, chi);
        }
    }

    #[test]
    fn gelfand_graev_examples() {
        let d = gl(2, 2);
        let t = dixon_table(&d.group, 1).unwrap();
        let gamma = gelfand_graev(&d).unwrap();
        assert_eq!(gamma.degree().as_i64(), Some(3));
        assert_eq!(regular_characters(&d, &t).unwrap().len(), 2);

        let d = gl(2, 3);
        let t = dixon_table(&d.group, 1).unwrap();
        let gamma = gelfand_graev(&d).unwrap();
        let reg = regular_characters(&d, &t).unwrap();
        let norm = inner_product(&d.group, &gamma, &gamma).unwrap();
        assert_eq!(norm, Cyclotomic::from_int(reg.len() as i64));
        assert!(!reg.contains(&t.trivial_index()));
        let st = t.index_of(&duality(&d, &ClassFunction::trivial(&d.group)).unwrap().normalized);
        assert!(reg.contains(&st.unwrap()));

        let ss = semisimple_characters(&d, &t).unwrap();
        assert!(ss.disagreements.is_empty());
        let by_degree: Vec<usize> = (0..t.len()).filter(|&i| !t.degrees[i].is_multiple_of(3)).collect();
        assert_eq!(ss.indices(), by_degree);
        assert_eq!(ss.indices().len(), reg.len());
    }

    #[test]
    fn gelfand_graev_choice_independence() {
        for d in [gl(2, 3), u(2, 3), u(3, 2)] {
            let choices = nondegenerate_choices(&d).unwrap();
            assert_eq!(choices.len(), 2, "{}", d.name());
            assert_ne!(choices[0], choices[1]);
            assert_eq!(
                gelfand_graev_with(&d, &choices[0]).unwrap(),
                gelfand_graev_with(&d, &choices[1]).unwrap()
            );
        }
    }

    #[test]
    fn unitary_root_coordinates() {
        let d = u(2, 3);
        let f = d.field();
        let rc = &d.root_coords[0];
        let trace_zero: Vec<Elem> = f
            .elements()
            .filter(|&c| f.add(c, f.frobenius_power(c, 1)) == 0)
            .collect();
        assert_eq!(rc.domain, trace_zero);
        for dd in [d, u(3, 2), gl(3, 2)] {
            let g = &dd.group;
            for rc in &dd.root_coords {
                let i = rc.root;
                for &t in &dd.t0.embedding {
                    let tm = g.element(t);
                    let ratio = f_ratio(&dd, tm, i);
                    for (&c, &x) in rc.domain.iter().zip(&rc.section) {
                        let y = g.conjugate(t, x);
                        let got = dd.coordinates(g.element(y))[i - 1];
                        assert_eq!(got, dd.field().mul(ratio, c));
                    }
                }
            }
        }
    }

    fn f_ratio(d: &LieGroupData, t: &Matrix, i: usize) -> Elem {
        let f = d.field();
        f.div(t.get(i - 1, i - 1), t.get(i, i)).unwrap()
    }

    #[test]
    fn regular_unipotent_centralizers() {
        for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let d = gl(n, q);
            let c = regular_unipotent_class(&d).unwrap();
            let want = q.pow(n as u32 - 1) * (q - 1);
            assert_eq!(d.group.classes().centralizer_orders[c], want, "GL({n},{q})");
            let triv = ClassFunction::trivial(&d.group);
            assert_eq!(regular_unipotent_average(&d, &triv).unwrap(), Cyclotomic::one());
        }
    }

    #[test]
    fn prasad_examples() {
        let d = u(2, 5);
        let ps = prasad_element(&d).unwrap();
        let f = d.field();
        let s = d.group.element(ps.s);
        let gamma = s.get(0, 0);
        assert_eq!(f.mul(gamma, gamma), f.neg(1));
        assert_eq!(s.get(1, 1), f.neg(gamma));
        assert_eq!(*d.group.element(ps.z), d.group.space().scalar(f.neg(1)));

        let d = u(2, 3);
        let ps = prasad_element(&d).unwrap();
        let z = central_element_z(Family::U, 2, 3).unwrap();
        assert_eq!(*d.group.element(ps.z), z);
        let beta = z.get(0, 0);
        let f = d.field();
        assert_ne!(beta, 1);
        assert_ne!(beta, f.neg(1));
        let t = solve_norm_minus_one(3).unwrap().repr;
        assert_eq!(f.pow(t, 4), f.neg(1));
        assert_eq!(beta, f.mul(t, t));

        let d = u(3, 2);
        let ps = prasad_element(&d).unwrap();
        assert_eq!(ps.s, d.group.identity());
        assert_eq!(central_element_z(Family::U, 3, 2).unwrap(), d.group.space().identity());

        let d = gl(2, 3);
        let ps = prasad_element(&d).unwrap();
        assert_eq!(ps.z, d.group.identity());
        assert!(negates_simple_roots(&d, ps.s));
        assert!(matches!(central_element_z(Family::GL, 2, 3), Err(LieError::NotUnitary)));
    }

    #[test]
    fn u33_prasad_pattern() {
        let d = u(3, 3);
        assert_eq!(d.group.order(), 24192);
        let ps = prasad_element(&d).unwrap();
        let s = d.group.element(ps.s);
        let f = d.field();
        assert_eq!(f.mul(s.get(0, 0), s.get(1, 1)), f.neg(1));
        assert_eq!(ps.z, d.group.identity());
    }

    #[test]
    fn verify_small_groups() {
        for d in [gl(2, 2), gl(2, 3), u(2, 2), u(2, 3)] {
            let t = dixon_table(&d.group, 11).unwrap();
            assert!(orthogonality_check(&d.group, &t).passed);
            let rep = verify_theorems(&d, &t).unwrap();
            let bad = rep.failures(Theorem::All);
            assert!(bad.is_empty(), "{}: {bad:?}", d.name());
            if d.family == Family::U {
                assert!(rep.checks.iter().any(|c| c.check == CheckKind::Unitary));
            }
        }
    }

    #[test]
    fn theorem_names_roundtrip() {
        for t in [Theorem::FsDual, Theorem::CentralDual, Theorem::FsCentral, Theorem::Unitary, Theorem::All] {
            assert_eq!(t.to_string().parse::<Theorem>().unwrap(), t);
        }
        assert!("bogus".parse::<Theorem>().is_err());
        assert_eq!("GL".parse::<Family>().unwrap(), Family::GL);
    }
}
