//! Exact character tables by the Dixon–Schneider method.
//!
//! The class matrices `M_i` (entries `a_{ijk}`) act on the vector of central
//! character values `ω_χ(C_k) = |C_k| χ(g_k) / χ(1)` with eigenvalue
//! `ω_χ(C_i)`. Working over `F_P` with `P ≡ 1 (mod e)` and `P > 2√|G|`, the
//! common eigenvectors are split out with seeded random combinations of class
//! matrices, degrees are recovered from the norm relation, and each value
//! `χ(g)` is lifted by recovering the multiplicity of every `e`-th root of
//! unity as an eigenvalue of `g` through a discrete Fourier inversion mod `P`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classfun::{fs_indicator_irreducible, inner_product, ClassFunction, ClassFunctionError};
use crate::cyclo::Cyclotomic;
use crate::field::{is_prime, prime_factors};
use crate::group::{power_class_map, FiniteGroup, GroupId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartabError {
    #[error("eigenspaces did not split after {0} random combinations")]
    SplitFailed(usize),
    #[error("lifting failed: {0}")]
    LiftFailed(String),
    #[error(transparent)]
    ClassFunction(#[from] ClassFunctionError),
    #[error("table does not belong to group {0}")]
    WrongGroup(GroupId),
}

pub type Result<T> = std::result::Result<T, ChartabError>;

/// Random combinations tried before giving up on splitting.
pub const MAX_SPLIT_ROUNDS: usize = 64;

/// `entries[j][k] = #{(x, y) ∈ C_i × C_j : xy = g_k}` for the fixed
/// representative `g_k` of class `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassAlgebraMatrix {
    pub i: usize,
    pub entries: Vec<Vec<u64>>,
}

pub fn structure_constants(g: &FiniteGroup, i: usize) -> ClassAlgebraMatrix {
    let cd = g.classes();
    let r = cd.num_classes();
    let mut entries = vec![vec![0u64; r]; r];
    for (k, &z) in cd.reps.iter().enumerate() {
        for &x in &cd.members[i] {
            let y = g.mul(g.inv(x), z);
            entries[cd.class_of[y]][k] += 1;
        }
    }
    ClassAlgebraMatrix { i, entries }
}

/// Irreducible characters of one group, sorted by degree and then by value
/// vector.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub group: GroupId,
    pub exponent: u64,
    pub seed: u64,
    pub prime: u64,
    pub irreducibles: Vec<ClassFunction>,
    pub degrees: Vec<u64>,
    /// Frobenius–Schur indicator of each irreducible.
    pub indicators: Vec<i8>,
    /// Index of the complex conjugate of each irreducible.
    pub conjugate_index: Vec<usize>,
}

impl CharacterTable {
    /// Wraps precomputed irreducibles, deriving degrees, indicators and the
    /// conjugation permutation. Does not check orthogonality.
    pub fn from_irreducibles(
        g: &FiniteGroup,
        irreducibles: Vec<ClassFunction>,
        seed: u64,
        prime: u64,
    ) -> Result<Self> {
        for chi in &irreducibles {
            chi.check_group(g.id())?;
        }
        let degrees = irreducibles
            .iter()
            .map(|c| {
                c.degree()
                    .as_i64()
                    .filter(|&d| d > 0)
                    .map(|d| d as u64)
                    .ok_or_else(|| ChartabError::LiftFailed(format!("degree {}", c.degree())))
            })
            .collect::<Result<Vec<_>>>()?;
        let indicators = irreducibles
            .par_iter()
            .map(|c| fs_indicator_irreducible(g, c))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let conjugate_index = irreducibles
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let cc = c.conj();
                irreducibles
                    .iter()
                    .position(|d| *d == cc)
                    .unwrap_or(i)
            })
            .collect();
        Ok(CharacterTable {
            group: g.id(),
            exponent: g.classes().exponent,
            seed,
            prime,
            irreducibles,
            degrees,
            indicators,
            conjugate_index,
        })
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    /// Index of the trivial character.
    pub fn trivial_index(&self) -> usize {
        self.irreducibles
            .iter()
            .position(|c| c.values.iter().all(|v| *v == Cyclotomic::one()))
            .expect("trivial character present")
    }

    /// Position of an irreducible in the table, if present.
    pub fn index_of(&self, chi: &ClassFunction) -> Option<usize> {
        self.irreducibles.iter().position(|c| c == chi)
    }
}

mod modp {
    pub fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
        pow(a, p - 2, p)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(sel) = (r..rows).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, sel);
            let iv = inv(m[r][c], p);
            for x in m[r].iter_mut() {
                *x = *x * iv % p;
            }
            let prow = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let f = row[c];
                    for (x, y) in row.iter_mut().zip(&prow) {
                        *x = (*x + p - f * y % p) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of `{v : m v = 0}`.
    pub fn nullspace(mut m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
        let cols = m.first().map_or(0, |r| r.len());
        let pivots = rref(&mut m, p);
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - m[r][f]) % p;
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial (lowest degree first) via Hessenberg form.
    pub fn charpoly(mut a: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
        let n = a.len();
        for m in 0..n.saturating_sub(2) {
            let Some(i) = (m + 1..n).find(|&i| a[i][m] != 0) else {
                continue;
            };
            if i != m + 1 {
                a.swap(i, m + 1);
                for row in a.iter_mut() {
                    row.swap(i, m + 1);
                }
            }
            let tinv = inv(a[m + 1][m], p);
            for r in m + 2..n {
                let u = a[r][m] * tinv % p;
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    let sub = u * a[m + 1][c] % p;
                    a[r][c] = (a[r][c] + p - sub) % p;
                }
                for row in a.iter_mut() {
                    row[m + 1] = (row[m + 1] + u * row[r]) % p;
                }
            }
        }
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for m in 1..=n {
            let prev = &polys[m - 1];
            let mut cur = vec![0u64; m + 1];
            let h = a[m - 1][m - 1];
            for (d, &c) in prev.iter().enumerate() {
                cur[d + 1] = (cur[d + 1] + c) % p;
                cur[d] = (cur[d] + p - h * c % p) % p;
            }
            let mut t = 1u64;
            for i in (1..m).rev() {
                t = t * a[i][i - 1] % p;
                let coef = t * a[i - 1][m - 1] % p;
                if coef == 0 {
                    continue;
                }
                for (d, &c) in polys[i - 1].iter().enumerate() {
                    cur[d] = (cur[d] + p - coef * c % p) % p;
                }
            }
            polys.push(cur);
        }
        polys.pop().unwrap()
    }

    pub fn eval(poly: &[u64], x: u64, p: u64) -> u64 {
        poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
    }
}

/// Smallest prime `P ≡ 1 (mod e)` with `P > 2⌈√|G|⌉`.
pub fn dixon_prime(exponent: u64, group_order: u64) -> u64 {
    let bound = 2 * isqrt_ceil(group_order);
    let mut p = exponent + 1;
    while p <= bound || !is_prime(p) {
        p += exponent;
    }
    p
}

fn isqrt_ceil(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

fn isqrt_floor(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&r| modp::pow(g, (p - 1) / r, p) != 1))
        .expect("prime has a primitive root")
}

/// Splits every subspace of dimension > 1 into eigenspaces of `a`.
fn split_spaces(spaces: Vec<Vec<Vec<u64>>>, a: &[Vec<u64>], p: u64) -> Vec<Vec<Vec<u64>>> {
    let r = a.len();
    let mut out = Vec::new();
    for basis in spaces {
        let d = basis.len();
        if d == 1 {
            out.push(basis);
            continue;
        }
        // Basis rows are in RREF; coordinates are read off the pivot columns.
        let pivots: Vec<usize> = basis
            .iter()
            .map(|b| b.iter().position(|&x| x != 0).unwrap())
            .collect();
        // rt[i][j]: coordinate i of A·b_j, i.e. the restricted map on coordinates.
        let mut rt = vec![vec![0u64; d]; d];
        for (j, b) in basis.iter().enumerate() {
            for (i, &pc) in pivots.iter().enumerate() {
                rt[i][j] = (0..r).fold(0, |acc, k| (acc + a[pc][k] * b[k]) % p);
            }
        }
        let cp = modp::charpoly(rt.clone(), p);
        let mut found = 0;
        let mut pieces = Vec::new();
        for lambda in 0..p {
            if found == d {
                break;
            }
            if modp::eval(&cp, lambda, p) != 0 {
                continue;
            }
            let mut shifted = rt.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = (row[i] + p - lambda) % p;
            }
            let null = modp::nullspace(shifted, p);
            if null.is_empty() {
                continue;
            }
            found += null.len();
            let mut vecs: Vec<Vec<u64>> = null
                .iter()
                .map(|c| {
                    (0..r)
                        .map(|k| {
                            c.iter()
                                .zip(&basis)
                                .fold(0, |acc, (&ci, b)| (acc + ci * b[k]) % p)
                        })
                        .collect()
                })
                .collect();
            modp::rref(&mut vecs, p);
            pieces.push(vecs);
        }
        if found != d {
            // Not diagonalizable on this piece; keep it whole.
            out.push(basis);
        } else {
            out.extend(pieces);
        }
    }
    out
}

/// Exact character table of `g`, with `seed` driving the eigenspace splitting.
pub fn dixon_table(g: &FiniteGroup, seed: u64) -> Result<CharacterTable> {
    let cd = g.classes();
    let r = cd.num_classes();
    let order = g.order() as u64;
    let e = cd.exponent;
    let p = dixon_prime(e, order);

    let class_mats: Vec<Vec<Vec<u64>>> = (0..r)
        .into_par_iter()
        .map(|i| {
            structure_constants(g, i)
                .entries
                .into_iter()
                .map(|row| row.into_iter().map(|x| x % p).collect())
                .collect()
        })
        .collect();

    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rounds = 0;
    while spaces.iter().any(|s| s.len() > 1) {
        if rounds == MAX_SPLIT_ROUNDS {
            return Err(ChartabError::SplitFailed(rounds));
        }
        rounds += 1;
        let coeffs: Vec<u64> = (0..r).map(|_| rng.gen_range(0..p)).collect();
        let mut a = vec![vec![0u64; r]; r];
        for (m, &c) in class_mats.iter().zip(&coeffs) {
            if c == 0 {
                continue;
            }
            for (arow, mrow) in a.iter_mut().zip(m) {
                for (x, &y) in arow.iter_mut().zip(mrow) {
                    *x = (*x + c * y) % p;
                }
            }
        }
        spaces = split_spaces(spaces, &a, p);
    }
    if spaces.len() != r {
        return Err(ChartabError::LiftFailed(format!(
            "{} eigenvectors for {r} classes",
            spaces.len()
        )));
    }

    let inverse_class = power_class_map(g, -1);
    // Classes of g_k^l for 0 <= l < o(g_k).
    let power_classes: Vec<Vec<usize>> = (0..r)
        .map(|k| {
            let rep = cd.reps[k];
            let mut x = g.identity();
            (0..cd.rep_orders[k])
                .map(|_| {
                    let c = cd.class_of[x];
                    x = g.mul(x, rep);
                    c
                })
                .collect()
        })
        .collect();
    let z_e = modp::pow(primitive_root(p), (p - 1) / e, p);
    let max_degree = isqrt_floor(order);

    let mut irreducibles = Vec::with_capacity(r);
    for space in &spaces {
        let v = &space[0];
        if v[0] == 0 {
            return Err(ChartabError::LiftFailed("eigenvector vanishes at identity".into()));
        }
        let scale = modp::inv(v[0], p);
        let omega: Vec<u64> = v.iter().map(|&x| x * scale % p).collect();
        // Σ_k ω_k ω_{k'} / |C_k| = |G| / χ(1)².
        let norm = (0..r).fold(0u64, |acc, k| {
            let t = omega[k] * omega[inverse_class[k]] % p * modp::inv(cd.sizes[k] % p, p) % p;
            (acc + t) % p
        });
        if norm == 0 {
            return Err(ChartabError::LiftFailed("zero norm".into()));
        }
        let d2 = order % p * modp::inv(norm, p) % p;
        let degree = (1..=max_degree)
            .find(|&d| d * d % p == d2)
            .ok_or_else(|| ChartabError::LiftFailed(format!("no degree with square {d2} mod {p}")))?;
        let values_mod: Vec<u64> = (0..r)
            .map(|k| omega[k] * (degree % p) % p * modp::inv(cd.sizes[k] % p, p) % p)
            .collect();
        let values = (0..r)
            .map(|k| {
                let o = cd.rep_orders[k];
                let zeta = modp::pow(z_e, e / o, p);
                let zeta_inv = modp::inv(zeta, p);
                let o_inv = modp::inv(o % p, p);
                let mut counts = vec![0i64; o as usize];
                for (j, slot) in counts.iter_mut().enumerate() {
                    let step = modp::pow(zeta_inv, j as u64, p);
                    let mut w = 1u64;
                    let mut s = 0u64;
                    for &c in &power_classes[k] {
                        s = (s + values_mod[c] * w) % p;
                        w = w * step % p;
                    }
                    let m = s * o_inv % p;
                    if m > degree {
                        return Err(ChartabError::LiftFailed(format!(
                            "multiplicity {m} exceeds degree {degree}"
                        )));
                    }
                    *slot = m as i64;
                }
                let mut full = vec![0i64; e as usize];
                for (j, &m) in counts.iter().enumerate() {
                    full[j * (e / o) as usize] = m;
                }
                Ok(Cyclotomic::from_exponent_counts(e as u32, &full))
            })
            .collect::<Result<Vec<_>>>()?;
        irreducibles.push(ClassFunction::new(g.id(), values));
    }
    sort_characters(&mut irreducibles);
    CharacterTable::from_irreducibles(g, irreducibles, seed, p)
}

type SortKey = (BigInt, Vec<(u32, Vec<BigRational>)>);

fn sort_key(chi: &ClassFunction) -> SortKey {
    let deg = chi.degree().as_integer().unwrap_or_default();
    let vals = chi
        .values
        .iter()
        .map(|v| {
            let m = v.minimize();
            (m.order(), m.coefficients())
        })
        .collect();
    (deg, vals)
}

/// Orders characters by degree, then lexicographically by canonical values.
pub fn sort_characters(chars: &mut Vec<ClassFunction>) {
    let mut keyed: Vec<(SortKey, ClassFunction)> =
        chars.drain(..).map(|c| (sort_key(&c), c)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    chars.extend(keyed.into_iter().map(|(_, c)| c));
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrthogonalityReport {
    pub passed: bool,
    /// Pairs `(i, j)` of irreducibles with `⟨χ_i, χ_j⟩ ≠ δ_ij`.
    pub row_violations: Vec<(usize, usize)>,
    /// Pairs `(c, c')` of classes violating column orthogonality.
    pub column_violations: Vec<(usize, usize)>,
    pub degree_square_sum: u64,
    pub group_order: u64,
    /// `Σ_χ χ(1)²`, from the identity column.
    pub identity_column: String,
}

/// Checks both orthogonality relations exactly.
pub fn orthogonality_check(g: &FiniteGroup, table: &CharacterTable) -> OrthogonalityReport {
    let cd = g.classes();
    let r = cd.num_classes();
    let n = table.len();
    let order = g.order() as u64;
    let row_violations: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            (i..n)
                .filter(move |&j| {
                    let ip = inner_product(g, &table.irreducibles[i], &table.irreducibles[j]);
                    let want = Cyclotomic::from_int((i == j) as i64);
                    !matches!(ip, Ok(v) if v == want)
                })
                .map(move |j| (i, j))
        })
        .collect();
    let conj: Vec<Vec<Cyclotomic>> = table
        .irreducibles
        .iter()
        .map(|c| c.values.iter().map(Cyclotomic::conj).collect())
        .collect();
    let column = |c: usize, d: usize| -> Cyclotomic {
        table
            .irreducibles
            .iter()
            .zip(&conj)
            .map(|(chi, cc)| &chi.values[c] * &cc[d])
            .sum()
    };
    let column_violations: Vec<(usize, usize)> = (0..r)
        .into_par_iter()
        .flat_map_iter(|c| {
            (c..r)
                .filter(move |&d| {
                    let want = if c == d { cd.centralizer_orders[c] as i64 } else { 0 };
                    n != r || column(c, d) != Cyclotomic::from_int(want)
                })
                .map(move |d| (c, d))
        })
        .collect();
    let degree_square_sum: u64 = table.degrees.iter().map(|d| d * d).sum();
    let identity_column = if r > 0 && n > 0 {
        column(0, 0).to_string()
    } else {
        "0".to_string()
    };
    OrthogonalityReport {
        passed: row_violations.is_empty()
            && column_violations.is_empty()
            && degree_square_sum == order
            && n == r,
        row_violations,
        column_violations,
        degree_square_sum,
        group_order: order,
        identity_column,
    }
}
