//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use fracube::model::DigitSet;
use fracube::topology::ComponentLabeling;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED_ENV: &str = "FRACUBE_TEST_SEED";

pub fn seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1)
}

/// Generator for one test, derived from the global seed and a stream tag.
pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn set(n: u64, d: usize, digits: &[&[u64]]) -> DigitSet {
    DigitSet::new(n, d, digits.iter().map(|x| x.to_vec()).collect()).unwrap()
}

pub fn all_vectors(n: u64, d: usize) -> Vec<Vec<u64>> {
    let total = n.pow(d as u32);
    (0..total)
        .map(|mut i| {
            (0..d)
                .map(|_| {
                    let c = i % n;
                    i /= n;
                    c
                })
                .collect()
        })
        .collect()
}

pub fn random_digitset(rng: &mut impl Rng, n: u64, d: usize, count: usize) -> DigitSet {
    let universe = all_vectors(n, d);
    let picked = sample(rng, universe.len(), count)
        .into_iter()
        .map(|i| universe[i].clone())
        .collect();
    DigitSet::new(n, d, picked).unwrap()
}

/// Cells of `E_k` by expanding every word of length `k`.
pub fn word_cells(digits: &DigitSet, k: u32) -> HashSet<Vec<u64>> {
    let n = digits.base();
    let mut cells: HashSet<Vec<u64>> = HashSet::from([vec![0; digits.dim()]]);
    for _ in 0..k {
        cells = cells
            .iter()
            .flat_map(|c| {
                digits
                    .digits()
                    .map(|h| c.iter().zip(h).map(|(a, b)| a * n + b).collect::<Vec<u64>>())
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    cells
}

pub type Partition = Vec<Vec<Vec<u64>>>;

fn canonical(mut parts: Partition) -> Partition {
    for p in &mut parts {
        p.sort();
    }
    parts.sort();
    parts
}

/// Components of a cell set by breadth-first flood fill over all
/// `3^d − 1` neighbours.
pub fn bfs_partition(cells: &HashSet<Vec<u64>>) -> Partition {
    let Some(dim) = cells.iter().next().map(Vec::len) else {
        return Vec::new();
    };
    let offsets: Vec<Vec<i64>> = (0..3i64.pow(dim as u32))
        .map(|mut i| {
            (0..dim)
                .map(|_| {
                    let o = i % 3 - 1;
                    i /= 3;
                    o
                })
                .collect()
        })
        .filter(|o: &Vec<i64>| o.iter().any(|&x| x != 0))
        .collect();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut parts = Vec::new();
    let mut sorted: Vec<&Vec<u64>> = cells.iter().collect();
    sorted.sort();
    for start in sorted {
        if !seen.insert(start.clone()) {
            continue;
        }
        let mut part = vec![start.clone()];
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(c) = queue.pop_front() {
            for o in &offsets {
                let nb: Option<Vec<u64>> = c
                    .iter()
                    .zip(o)
                    .map(|(&x, &dx)| x.checked_add_signed(dx))
                    .collect();
                if let Some(nb) = nb {
                    if cells.contains(&nb) && seen.insert(nb.clone()) {
                        part.push(nb.clone());
                        queue.push_back(nb);
                    }
                }
            }
        }
        parts.push(part);
    }
    canonical(parts)
}

pub fn labeling_partition(labeling: &ComponentLabeling<'_>) -> Partition {
    let grid = labeling.grid();
    let parts = (0..labeling.component_count() as u32)
        .map(|id| {
            labeling
                .cells_of(id)
                .into_iter()
                .map(|i| grid.coords_of(i))
                .collect()
        })
        .collect();
    canonical(parts)
}

/// Components avoiding every face of `[0, m−1]^d`.
pub fn islands_of(partition: &Partition, m: u64) -> Vec<&Vec<Vec<u64>>> {
    partition
        .iter()
        .filter(|p| p.iter().all(|c| c.iter().all(|&x| x >= 1 && x + 2 <= m)))
        .collect()
}

pub fn is_irreducible(a: &[Vec<i64>]) -> bool {
    let n = a.len();
    (0..n).all(|s| {
        let mut seen = vec![false; n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if a[i][j] > 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&b| b)
    })
}

/// Coefficients of `det(xI − A)`, lowest degree first, by the
/// Faddeev–LeVerrier recursion in exact integers.
pub fn char_poly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let a: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &x[i][k] * &y[k][j]).sum())
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![BigInt::from(0); n + 1];
    coeffs[n] = BigInt::from(1);
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::from(0); n]; n];
    for k in 1..=n {
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let am = mul(&a, &m);
        let trace: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -trace / BigInt::from(k as i64);
        m = am;
    }
    coeffs
}

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1
        && p.last()
            .is_some_and(|c| *c == BigRational::from_integer(0.into()))
    {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigRational::from_integer(0.into()));
    }
    p
}

fn rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0] == BigRational::from_integer(0.into())) {
        let shift = r.len() - b.len();
        let q = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &q * c;
        }
        r.pop();
        r = trim(r);
        if r.len() < b.len() {
            break;
        }
    }
    trim(r)
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::from_integer(0.into()), |acc, c| acc * x + c)
}

fn sturm_chain(p: &[BigInt]) -> Vec<Poly> {
    let p0: Poly = p.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let p1: Poly = trim(
        p0.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i as i64)))
            .collect(),
    );
    let mut chain = vec![trim(p0), p1];
    loop {
        let len = chain.len();
        let r = rem(&chain[len - 2], &chain[len - 1]);
        if r.len() == 1 && r[0] == BigRational::from_integer(0.into()) {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(chain: &[Poly], x: &BigRational) -> usize {
    let zero = BigRational::from_integer(0.into());
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| *v != zero)
        .map(|v| v > zero)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Bracket `[lo, hi]` of width at most `2^-bits · hi0` around the largest
/// real root of the monic integer polynomial `p`, with all real roots in
/// `(lo0, hi0]`.
pub fn largest_root(p: &[BigInt], lo0: i64, hi0: i64, bits: u32) -> (BigRational, BigRational) {
    let chain = sturm_chain(p);
    let mut lo = BigRational::from_integer(lo0.into());
    let mut hi = BigRational::from_integer(hi0.into());
    let two = BigRational::from_integer(2.into());
    let v_hi = sign_changes(&chain, &hi);
    assert!(sign_changes(&chain, &lo) > v_hi, "no root above {lo0}");
    for _ in 0..bits {
        let mid = (&lo + &hi) / &two;
        if sign_changes(&chain, &mid) > v_hi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}
