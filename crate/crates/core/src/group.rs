//! Finite matrix groups over `F_q`: enumeration, conjugacy classes, power
//! maps, centers, subgroups and class fusion.
//!
//! Elements are kept in a frozen array sorted by their canonical key, the
//! mixed-radix number whose base-`q` digits are the matrix entries in
//! row-major order. Index lookup is a binary search on that array.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::{Elem, FieldElement, PrimePowerField};

pub const MAX_DIM: usize = 4;

/// Default cap on the number of elements `generate` will enumerate.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix dimension {0} unsupported (1..={MAX_DIM})")]
    BadDimension(usize),
    #[error("matrix keys for dimension {n} over F_{q} exceed 128 bits")]
    KeyOverflow { n: usize, q: u32 },
    #[error("matrix is singular")]
    Singular,
    #[error("entries come from different fields")]
    FieldMismatch,
    #[error("expected a {expected}x{expected} matrix, got {got}x{got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("group enumeration exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("subset is not a subgroup")]
    NotASubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("element is not central")]
    NotCentral,
    #[error("element is not in the group")]
    NotAnElement,
}

pub type Result<T> = std::result::Result<T, GroupError>;

/// An `n×n` matrix over a field known from context; entries row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: u8,
    e: [Elem; MAX_DIM * MAX_DIM],
}

/// Matrices are the group elements throughout.
pub type GroupElement = Matrix;

impl Matrix {
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.e[i * self.n as usize + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.e[i * self.n as usize + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Fixed-width canonical byte encoding: entries big-endian, row-major.
    pub fn encode(&self) -> Vec<u8> {
        let n = self.dim();
        self.e[..n * n].iter().flat_map(|x| x.to_be_bytes()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.get(i, j) == 0))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

/// `n×n` matrices over a fixed field.
#[derive(Clone)]
pub struct MatrixSpace {
    field: Arc<PrimePowerField>,
    n: usize,
}

impl fmt::Debug for MatrixSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M_{}(F_{})", self.n, self.field.order())
    }
}

impl MatrixSpace {
    pub fn new(field: &Arc<PrimePowerField>, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(GroupError::BadDimension(n));
        }
        let bits = (field.order() as f64).log2() * (n * n) as f64;
        if bits > 127.0 {
            return Err(GroupError::KeyOverflow {
                n,
                q: field.order(),
            });
        }
        Ok(MatrixSpace {
            field: Arc::clone(field),
            n,
        })
    }

    pub fn field(&self) -> &Arc<PrimePowerField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> Matrix {
        Matrix {
            n: self.n as u8,
            e: [0; MAX_DIM * MAX_DIM],
        }
    }

    pub fn scalar(&self, a: Elem) -> Matrix {
        let mut m = self.zero();
        for i in 0..self.n {
            m.set(i, i, a);
        }
        m
    }

    pub fn identity(&self) -> Matrix {
        self.scalar(1)
    }

    pub fn diag(&self, d: &[Elem]) -> Matrix {
        assert_eq!(d.len(), self.n);
        let mut m = self.zero();
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn from_rows(&self, rows: &[Vec<Elem>]) -> Result<Matrix> {
        if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
            return Err(GroupError::DimensionMismatch {
                expected: self.n,
                got: rows.len(),
            });
        }
        let mut m = self.zero();
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                assert!(x < self.field.order(), "entry out of range");
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    /// Builds an invertible matrix from checked field elements.
    pub fn element(&self, rows: &[Vec<FieldElement>]) -> Result<Matrix> {
        if rows.iter().flatten().any(|x| *x.field != *self.field) {
            return Err(GroupError::FieldMismatch);
        }
        let raw: Vec<Vec<Elem>> = rows
            .iter()
            .map(|r| r.iter().map(|x| x.repr).collect())
            .collect();
        let m = self.from_rows(&raw)?;
        if self.det(&m) == 0 {
            return Err(GroupError::Singular);
        }
        Ok(m)
    }

    pub fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let f = &self.field;
        let n = self.n;
        let mut c = self.zero();
        for i in 0..n {
            for k in 0..n {
                let aik = a.get(i, k);
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    let bkj = b.get(k, j);
                    if bkj != 0 {
                        let v = f.add(c.get(i, j), f.mul(aik, bkj));
                        c.set(i, j, v);
                    }
                }
            }
        }
        c
    }

    pub fn det(&self, a: &Matrix) -> Elem {
        let f = &self.field;
        let n = self.n;
        let mut m = *a;
        let mut det = 1;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m.get(r, col) != 0) else {
                return 0;
            };
            if piv != col {
                for j in 0..n {
                    let (x, y) = (m.get(col, j), m.get(piv, j));
                    m.set(col, j, y);
                    m.set(piv, j, x);
                }
                det = f.neg(det);
            }
            let pv = m.get(col, col);
            det = f.mul(det, pv);
            let pinv = f.inv(pv).unwrap();
            for r in col + 1..n {
                let factor = f.mul(m.get(r, col), pinv);
                if factor != 0 {
                    for j in col..n {
                        let v = f.sub(m.get(r, j), f.mul(factor, m.get(col, j)));
                        m.set(r, j, v);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self, a: &Matrix) -> Option<Matrix> {
        let f = &self.field;
        let n = self.n;
        let mut m = *a;
        let mut inv = self.identity();
        for col in 0..n {
            let piv = (col..n).find(|&r| m.get(r, col) != 0)?;
            for j in 0..n {
                let (x, y) = (m.get(col, j), m.get(piv, j));
                m.set(col, j, y);
                m.set(piv, j, x);
                let (x, y) = (inv.get(col, j), inv.get(piv, j));
                inv.set(col, j, y);
                inv.set(piv, j, x);
            }
            let pinv = f.inv(m.get(col, col)).unwrap();
            for j in 0..n {
                m.set(col, j, f.mul(m.get(col, j), pinv));
                inv.set(col, j, f.mul(inv.get(col, j), pinv));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = m.get(r, col);
                if factor != 0 {
                    for j in 0..n {
                        m.set(r, j, f.sub(m.get(r, j), f.mul(factor, m.get(col, j))));
                        inv.set(r, j, f.sub(inv.get(r, j), f.mul(factor, inv.get(col, j))));
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn transpose(&self, a: &Matrix) -> Matrix {
        let mut t = self.zero();
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, a.get(i, j));
            }
        }
        t
    }

    pub fn map_entries(&self, a: &Matrix, f: impl Fn(Elem) -> Elem) -> Matrix {
        let mut m = *a;
        for x in m.e[..self.n * self.n].iter_mut() {
            *x = f(*x);
        }
        m
    }

    /// Mixed-radix key; row-major with the `(0,0)` entry most significant.
    pub fn key(&self, a: &Matrix) -> u128 {
        let q = self.field.order() as u128;
        a.e[..self.n * self.n]
            .iter()
            .fold(0u128, |acc, &x| acc * q + x as u128)
    }

    pub fn from_key(&self, mut key: u128) -> Matrix {
        let q = self.field.order() as u128;
        let mut m = self.zero();
        for idx in (0..self.n * self.n).rev() {
            m.e[idx] = (key % q) as Elem;
            key /= q;
        }
        m
    }
}

/// Short content hash identifying a group's element set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupId(pub u64);

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// An enumerated matrix group with a frozen, key-sorted element array.
pub struct FiniteGroup {
    space: MatrixSpace,
    elements: Vec<Matrix>,
    keys: Vec<u128>,
    identity: usize,
    inverse: Vec<u32>,
    generators: Vec<usize>,
    id: GroupId,
    classes: OnceLock<ConjugacyData>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {}, {:?}, id {})", self.order(), self.space, self.id)
    }
}

/// Breadth-first closure under right multiplication; frontier sorted by key.
fn closure(space: &MatrixSpace, gens: &[Matrix], cap: usize) -> Result<Vec<u128>> {
    let id = space.identity();
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(space.key(&id));
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = space.mul(x, g);
                if seen.insert(space.key(&y)) {
                    if seen.len() > cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    next.push(y);
                }
            }
        }
        next.sort_by_key(|m| space.key(m));
        frontier = next;
    }
    let mut keys: Vec<u128> = seen.into_iter().collect();
    keys.sort_unstable();
    Ok(keys)
}

impl FiniteGroup {
    fn freeze(space: &MatrixSpace, keys: Vec<u128>, generators: Vec<Matrix>) -> Self {
        let elements: Vec<Matrix> = keys.iter().map(|&k| space.from_key(k)).collect();
        let idk = space.key(&space.identity());
        let identity = keys.binary_search(&idk).expect("identity present");
        let inverse = elements
            .iter()
            .map(|m| {
                let inv = space.inverse(m).expect("invertible");
                keys.binary_search(&space.key(&inv)).expect("closed under inverse") as u32
            })
            .collect();
        let mut hasher = Sha256::new();
        let fd = space.field.descriptor();
        hasher.update(fd.p.to_be_bytes());
        hasher.update(fd.k.to_be_bytes());
        for c in &fd.modulus {
            hasher.update(c.to_be_bytes());
        }
        hasher.update((space.n as u32).to_be_bytes());
        for k in &keys {
            hasher.update(k.to_be_bytes());
        }
        let digest = hasher.finalize();
        let id = GroupId(u64::from_be_bytes(digest[..8].try_into().unwrap()));
        let generators = generators
            .iter()
            .map(|g| keys.binary_search(&space.key(g)).unwrap())
            .collect();
        FiniteGroup {
            space: space.clone(),
            elements,
            keys,
            identity,
            inverse,
            generators,
            id,
            classes: OnceLock::new(),
        }
    }

    /// Group generated by `gens`, enumerated breadth-first.
    pub fn generate(space: &MatrixSpace, gens: &[Matrix], cap: usize) -> Result<Self> {
        for g in gens {
            if g.dim() != space.n {
                return Err(GroupError::DimensionMismatch {
                    expected: space.n,
                    got: g.dim(),
                });
            }
            if space.det(g) == 0 {
                return Err(GroupError::Singular);
            }
        }
        let keys = closure(space, gens, cap)?;
        Ok(Self::freeze(space, keys, gens.to_vec()))
    }

    /// Checked generation from matrices of field elements.
    pub fn generate_checked(gens: &[Vec<Vec<FieldElement>>], cap: usize) -> Result<Self> {
        let first = gens
            .first()
            .and_then(|g| g.first())
            .and_then(|r| r.first())
            .ok_or(GroupError::BadDimension(0))?;
        let space = MatrixSpace::new(&first.field, gens[0].len())?;
        let mats = gens
            .iter()
            .map(|g| space.element(g))
            .collect::<Result<Vec<_>>>()?;
        Self::generate(&space, &mats, cap)
    }

    /// Group with exactly the given elements; fails unless they form a
    /// subgroup. A generating set is chosen greedily in key order.
    pub fn from_elements(space: &MatrixSpace, elements: &[Matrix]) -> Result<Self> {
        let mut target: Vec<u128> = elements.iter().map(|m| space.key(m)).collect();
        target.sort_unstable();
        target.dedup();
        let mut gens: Vec<Matrix> = Vec::new();
        let mut current = vec![space.key(&space.identity())];
        for &k in &target {
            if current.binary_search(&k).is_ok() {
                continue;
            }
            gens.push(space.from_key(k));
            current = closure(space, &gens, target.len())
                .map_err(|_| GroupError::NotASubgroup)?;
            if current.iter().any(|c| target.binary_search(c).is_err()) {
                return Err(GroupError::NotASubgroup);
            }
        }
        if current != target {
            return Err(GroupError::NotASubgroup);
        }
        Ok(Self::freeze(space, target, gens))
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn field(&self) -> &Arc<PrimePowerField> {
        &self.space.field
    }

    pub fn id(&self) -> GroupId {
        self.id
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.keys.binary_search(&self.space.key(m)).ok()
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let m = self.space.mul(&self.elements[a], &self.elements[b]);
        self.index_of(&m).expect("group is closed")
    }

    /// `g x g^{-1}`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        let s = &self.space;
        let m = s.mul(&s.mul(&self.elements[g], &self.elements[x]), &self.elements[self.inv(g)]);
        self.index_of(&m).expect("group is closed")
    }

    pub fn pow(&self, i: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(i) } else { i };
        let mut e = e.unsigned_abs();
        let mut b = self.elements[base];
        let mut acc = self.space.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.space.mul(&acc, &b);
            }
            b = self.space.mul(&b, &b);
            e >>= 1;
        }
        self.index_of(&acc).expect("group is closed")
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let id = self.space.identity();
        let mut m = self.elements[i];
        let mut n = 1;
        while m != id {
            m = self.space.mul(&m, &self.elements[i]);
            n += 1;
        }
        n
    }

    /// Conjugacy data, computed on first use.
    pub fn classes(&self) -> &ConjugacyData {
        self.classes.get_or_init(|| conjugacy(self))
    }

    /// Exhaustive closure check, `O(|G|²)`.
    pub fn check_closure_exhaustive(&self) -> bool {
        (0..self.order()).all(|a| {
            (0..self.order()).all(|b| {
                let m = self.space.mul(&self.elements[a], &self.elements[b]);
                self.index_of(&m).is_some()
            })
        })
    }

    pub fn check_inverse_table(&self) -> bool {
        (0..self.order()).all(|i| {
            let j = self.inv(i);
            self.inv(j) == i && self.mul(i, j) == self.identity
        })
    }
}

/// Conjugacy classes of a group.
///
/// Class 0 is always the identity class; the remaining classes are ordered
/// by their smallest element index, which is also the representative.
#[derive(Debug, Clone)]
pub struct ConjugacyData {
    pub group_id: GroupId,
    pub group_order: u64,
    pub class_of: Vec<usize>,
    pub reps: Vec<usize>,
    pub sizes: Vec<u64>,
    pub centralizer_orders: Vec<u64>,
    /// Element order of each class representative.
    pub rep_orders: Vec<u64>,
    pub exponent: u64,
    pub members: Vec<Vec<usize>>,
}

impl ConjugacyData {
    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    /// Orbit-stabilizer and partition sanity checks.
    pub fn validate(&self, g: &FiniteGroup) -> bool {
        let total: u64 = self.sizes.iter().sum();
        total == self.group_order
            && self
                .sizes
                .iter()
                .zip(&self.centralizer_orders)
                .all(|(s, c)| s * c == self.group_order)
            && self.reps.iter().all(|&r| {
                g.generators()
                    .iter()
                    .all(|&s| self.class_of[g.conjugate(s, r)] == self.class_of[r])
            })
    }
}

/// Full class partition by orbit expansion under conjugation by generators.
pub fn conjugacy(g: &FiniteGroup) -> ConjugacyData {
    let n = g.order();
    const UNSET: usize = usize::MAX;
    let mut class_of = vec![UNSET; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut gens: Vec<usize> = g.generators().to_vec();
    if gens.is_empty() {
        gens.push(g.identity());
    }
    let mut starts = vec![g.identity()];
    starts.extend((0..n).filter(|&i| i != g.identity()));
    for start in starts {
        if class_of[start] != UNSET {
            continue;
        }
        let c = members.len();
        let mut orbit = vec![start];
        class_of[start] = c;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                let y = g.conjugate(s, x);
                if class_of[y] == UNSET {
                    class_of[y] = c;
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        members.push(orbit);
    }
    let order = n as u64;
    let reps: Vec<usize> = members.iter().map(|m| m[0]).collect();
    let sizes: Vec<u64> = members.iter().map(|m| m.len() as u64).collect();
    let centralizer_orders = sizes.iter().map(|s| order / s).collect();
    let rep_orders: Vec<u64> = reps.iter().map(|&r| g.element_order(r)).collect();
    let exponent = rep_orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));
    ConjugacyData {
        group_id: g.id(),
        group_order: order,
        class_of,
        reps,
        sizes,
        centralizer_orders,
        rep_orders,
        exponent,
        members,
    }
}

/// Class of `g^m` for each class `g`.
pub fn power_class_map(g: &FiniteGroup, m: i64) -> Vec<usize> {
    let cd = g.classes();
    cd.reps
        .iter()
        .map(|&r| cd.class_of[g.pow(r, m)])
        .collect()
}

/// Indices of central elements (singleton classes), ascending.
pub fn center(g: &FiniteGroup) -> Vec<usize> {
    let cd = g.classes();
    let mut z: Vec<usize> = cd
        .members
        .iter()
        .filter(|m| m.len() == 1)
        .map(|m| m[0])
        .collect();
    z.sort_unstable();
    z
}

/// A subgroup as a standalone group plus its index embedding into the parent.
pub struct Subgroup {
    pub group: FiniteGroup,
    /// Subgroup index to parent index; increasing, since both arrays are key-sorted.
    pub embedding: Vec<usize>,
    parent_id: GroupId,
    fusion: OnceLock<Vec<usize>>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {})", self.group.order(), self.parent_id)
    }
}

impl Subgroup {
    pub fn from_indices(parent: &FiniteGroup, indices: &[usize]) -> Result<Self> {
        let mats: Vec<Matrix> = indices.iter().map(|&i| *parent.element(i)).collect();
        let group = FiniteGroup::from_elements(parent.space(), &mats)?;
        let embedding = group
            .elements()
            .iter()
            .map(|m| parent.index_of(m).unwrap())
            .collect();
        Ok(Subgroup {
            group,
            embedding,
            parent_id: parent.id(),
            fusion: OnceLock::new(),
        })
    }

    pub fn from_predicate(parent: &FiniteGroup, pred: impl Fn(&Matrix) -> bool) -> Result<Self> {
        let idx: Vec<usize> = (0..parent.order())
            .filter(|&i| pred(parent.element(i)))
            .collect();
        Self::from_indices(parent, &idx)
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Self::from_predicate(parent, |_| true).expect("a group is a subgroup of itself")
    }

    pub fn parent_id(&self) -> GroupId {
        self.parent_id
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn contains(&self, parent_index: usize) -> bool {
        self.embedding.binary_search(&parent_index).is_ok()
    }

    /// Subgroup class index to parent class index.
    pub fn fusion(&self, parent: &FiniteGroup) -> &[usize] {
        assert_eq!(parent.id(), self.parent_id, "fusion against a different parent");
        self.fusion.get_or_init(|| class_fusion(parent, self))
    }

    /// Whether `self` is normalized by `p`; both are subgroups of `parent`.
    pub fn is_normal_in(&self, p: &Subgroup, parent: &FiniteGroup) -> bool {
        if self.parent_id != parent.id() || p.parent_id != parent.id() {
            return false;
        }
        let contained = self.embedding.iter().all(|&x| p.contains(x));
        contained
            && p.group.generators().iter().all(|&s| {
                let s = p.embedding[s];
                self.group
                    .generators()
                    .iter()
                    .all(|&x| self.contains(parent.conjugate(s, self.embedding[x])))
            })
    }
}

pub fn class_fusion(parent: &FiniteGroup, sub: &Subgroup) -> Vec<usize> {
    let pc = parent.classes();
    sub.group
        .classes()
        .reps
        .iter()
        .map(|&r| pc.class_of[sub.embedding[r]])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Arc<PrimePowerField> {
        PrimePowerField::of_order(q).unwrap()
    }

    fn gl22() -> FiniteGroup {
        let s = MatrixSpace::new(&f(2), 2).unwrap();
        let a = s.from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let b = s.from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        FiniteGroup::generate(&s, &[a, b], DEFAULT_CAP).unwrap()
    }

    fn brute_gl(q: u64, n: usize) -> Vec<Matrix> {
        let field = f(q);
        let s = MatrixSpace::new(&field, n).unwrap();
        let total = (q as u128).pow((n * n) as u32);
        (0..total)
            .map(|k| s.from_key(k))
            .filter(|m| s.det(m) != 0)
            .collect()
    }

    #[test]
    fn generate_examples() {
        let g = gl22();
        assert_eq!(g.order(), 6);
        assert_eq!(brute_gl(2, 2).len(), 6);
        assert!(g.check_closure_exhaustive());
        assert!(g.check_inverse_table());

        let s = MatrixSpace::new(&f(5), 1).unwrap();
        let c4 = FiniteGroup::generate(&s, &[s.scalar(2)], DEFAULT_CAP).unwrap();
        assert_eq!(c4.order(), 4);

        let s2 = MatrixSpace::new(&f(3), 2).unwrap();
        let triv = FiniteGroup::generate(&s2, &[s2.identity()], DEFAULT_CAP).unwrap();
        assert_eq!(triv.order(), 1);
        assert_eq!(triv.classes().num_classes(), 1);
    }

    #[test]
    fn generate_errors() {
        let s = MatrixSpace::new(&f(3), 2).unwrap();
        let sing = s.from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(
            FiniteGroup::generate(&s, &[sing], DEFAULT_CAP).unwrap_err(),
            GroupError::Singular
        );
        let a = s.from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let b = s.from_rows(&[vec![0, 1], vec![2, 0]]).unwrap();
        assert_eq!(
            FiniteGroup::generate(&s, &[a, b], 10).unwrap_err(),
            GroupError::CapExceeded(10)
        );
        let f9 = f(9);
        let f3 = f(3);
        let rows = vec![
            vec![FieldElement::new(&f9, 1), FieldElement::new(&f3, 0)],
            vec![FieldElement::new(&f9, 0), FieldElement::new(&f9, 1)],
        ];
        assert_eq!(
            FiniteGroup::generate_checked(&[rows], DEFAULT_CAP).unwrap_err(),
            GroupError::FieldMismatch
        );
    }

    #[test]
    fn generator_order_does_not_matter() {
        let s = MatrixSpace::new(&f(3), 2).unwrap();
        let a = s.from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let b = s.from_rows(&[vec![0, 1], vec![2, 0]]).unwrap();
        let c = s.diag(&[2, 1]);
        let g1 = FiniteGroup::generate(&s, &[a, b, c], DEFAULT_CAP).unwrap();
        let g2 = FiniteGroup::generate(&s, &[c, a, b], DEFAULT_CAP).unwrap();
        assert_eq!(g1.order(), 48);
        assert_eq!(g1.elements(), g2.elements());
        assert_eq!(g1.id(), g2.id());
    }

    /// Brute-force conjugacy partition by testing every conjugator.
    fn brute_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
        let n = g.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|h| g.conjugate(h, x)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &y in &cls {
                seen[y] = true;
            }
            out.push(cls);
        }
        out
    }

    #[test]
    fn conjugacy_examples() {
        let g = gl22();
        let cd = g.classes();
        let mut sizes = cd.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert!(cd.validate(&g));
        assert_eq!(cd.reps[0], g.identity());

        let s = MatrixSpace::new(&f(3), 2).unwrap();
        let gl23 = FiniteGroup::from_elements(&s, &brute_gl(3, 2)).unwrap();
        let cd = gl23.classes();
        assert_eq!(cd.num_classes(), 8);
        assert_eq!(cd.sizes.iter().sum::<u64>(), 48);
        assert_eq!(brute_classes(&gl23).len(), 8);
        let mut ours = cd.members.clone();
        ours.sort();
        let mut theirs = brute_classes(&gl23);
        theirs.sort();
        assert_eq!(ours, theirs);

        let s1 = MatrixSpace::new(&f(7), 1).unwrap();
        let c6 = FiniteGroup::generate(&s1, &[s1.scalar(3)], DEFAULT_CAP).unwrap();
        assert!(c6.classes().sizes.iter().all(|&x| x == 1));
    }

    #[test]
    fn power_maps() {
        let g = gl22();
        let cd = g.classes();
        let id_map = power_class_map(&g, 1);
        assert_eq!(id_map, (0..cd.num_classes()).collect::<Vec<_>>());
        assert!(power_class_map(&g, 6).iter().all(|&c| c == 0));
        let sq = power_class_map(&g, 2);
        for c in 0..cd.num_classes() {
            match cd.rep_orders[c] {
                2 => assert_eq!(sq[c], 0),
                3 => assert_eq!(sq[c], c),
                _ => {}
            }
        }
    }

    #[test]
    fn involution_count_from_power_map() {
        let s = MatrixSpace::new(&f(3), 2).unwrap();
        let g = FiniteGroup::from_elements(&s, &brute_gl(3, 2)).unwrap();
        let cd = g.classes();
        let sq = power_class_map(&g, 2);
        let via_map: u64 = (0..cd.num_classes())
            .filter(|&c| sq[c] == 0)
            .map(|c| cd.sizes[c])
            .sum();
        let direct = (0..g.order())
            .filter(|&i| g.mul(i, i) == g.identity())
            .count() as u64;
        assert_eq!(via_map, direct);
    }

    #[test]
    fn centers() {
        let s = MatrixSpace::new(&f(3), 2).unwrap();
        let g = FiniteGroup::from_elements(&s, &brute_gl(3, 2)).unwrap();
        let z = center(&g);
        assert_eq!(z.len(), 2);
        assert!(z.iter().all(|&i| g.element(i).is_diagonal()));
        let triv = FiniteGroup::generate(&s, &[], DEFAULT_CAP).unwrap();
        assert_eq!(center(&triv), vec![triv.identity()]);
    }

    #[test]
    fn subgroups_and_fusion() {
        let g = gl22();
        let b = Subgroup::from_predicate(&g, |m| m.get(1, 0) == 0).unwrap();
        assert_eq!(b.order(), 2);
        let whole = Subgroup::whole(&g);
        assert_eq!(whole.embedding, (0..6).collect::<Vec<_>>());
        assert_eq!(whole.fusion(&g), &(0..3).collect::<Vec<_>>()[..]);

        let c3 = Subgroup::from_predicate(&g, |m| {
            let s = g.space();
            let m2 = s.mul(m, m);
            s.mul(&m2, m) == s.identity()
        })
        .unwrap();
        assert_eq!(c3.order(), 3);
        let fus = c3.fusion(&g);
        assert_eq!(fus[0], 0);
        assert_eq!(fus[1], fus[2]);
        assert_eq!(g.classes().rep_orders[fus[1]], 3);

        let s3 = MatrixSpace::new(&f(2), 3).unwrap();
        let gl32 = FiniteGroup::from_elements(&s3, &brute_gl(2, 3)).unwrap();
        assert_eq!(gl32.order(), 168);
        let u = Subgroup::from_predicate(&gl32, |m| {
            (0..3).all(|i| m.get(i, i) == 1 && (0..i).all(|j| m.get(i, j) == 0))
        })
        .unwrap();
        assert_eq!(u.order(), 8);

        let bad = Subgroup::from_predicate(&g, |m| m.get(0, 1) == 1);
        assert_eq!(bad.unwrap_err(), GroupError::NotASubgroup);
    }

    #[test]
    fn normality() {
        let s3 = MatrixSpace::new(&f(2), 3).unwrap();
        let g = FiniteGroup::from_elements(&s3, &brute_gl(2, 3)).unwrap();
        let b = Subgroup::from_predicate(&g, |m| (0..3).all(|i| (0..i).all(|j| m.get(i, j) == 0)))
            .unwrap();
        let u = Subgroup::from_predicate(&g, |m| {
            (0..3).all(|i| m.get(i, i) == 1 && (0..i).all(|j| m.get(i, j) == 0))
        })
        .unwrap();
        let x12 = Subgroup::from_predicate(&g, |m| {
            *m == s3.identity() || *m == s3.from_rows(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap()
        })
        .unwrap();
        let whole = Subgroup::whole(&g);
        assert!(u.is_normal_in(&b, &g));
        assert!(!x12.is_normal_in(&whole, &g));
        assert!(!u.is_normal_in(&whole, &g));
    }

    #[test]
    fn keys_roundtrip() {
        let s = MatrixSpace::new(&f(9), 3).unwrap();
        let m = s.from_rows(&[vec![8, 0, 3], vec![1, 2, 0], vec![0, 0, 7]]).unwrap();
        assert_eq!(s.from_key(s.key(&m)), m);
        assert_eq!(m.encode().len(), 36);
        let inv = s.inverse(&m).unwrap();
        assert_eq!(s.mul(&m, &inv), s.identity());
    }
}
