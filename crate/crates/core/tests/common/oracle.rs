//! Naive reference implementation of the graph complex: brute-force
//! generation, exhaustive canonical forms and rank over the rationals.
//! Shares no code with the library beyond the key format.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Edges = Vec<(usize, usize)>;

fn inversion_sign(perm: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// `(sign, key)` with the key rendered as `V:E:(s,t)...`, or `None` for zero.
pub fn canon(n: usize, edges: &Edges, perms: &[Vec<usize>]) -> Option<(i64, String)> {
    if edges.iter().any(|&(s, t)| s == t) {
        return None;
    }
    let mut best: Option<(Edges, i64)> = None;
    let mut conflict = false;
    for perm in perms {
        let mut sign = inversion_sign(perm);
        let mut mapped: Edges = edges
            .iter()
            .map(|&(s, t)| {
                let (a, b) = (perm[s], perm[t]);
                if a > b {
                    sign = -sign;
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .collect();
        mapped.sort();
        match &best {
            Some((b, s)) if mapped == *b => conflict |= *s != sign,
            Some((b, _)) if mapped > *b => {}
            _ => {
                best = Some((mapped, sign));
                conflict = false;
            }
        }
    }
    if conflict {
        return None;
    }
    let (edges, sign) = best?;
    let mut key = format!("{n}:{}:", edges.len());
    for (s, t) in edges {
        key.push_str(&format!("({},{})", s + 1, t + 1));
    }
    Some((sign, key))
}

fn multisets(pairs: &[(usize, usize)], e: usize, start: usize, acc: &mut Edges, out: &mut Vec<Edges>) {
    if acc.len() == e {
        out.push(acc.clone());
        return;
    }
    for p in start..pairs.len() {
        acc.push(pairs[p]);
        multisets(pairs, e, p, acc, out);
        acc.pop();
    }
}

/// Every class of loop-free multigraphs with `n` vertices, `e` edges and all
/// valencies at least three, sorted by key.
pub fn basis(n: usize, e: usize) -> Vec<String> {
    if n < 2 || 2 * e < 3 * n {
        return Vec::new();
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut all = Vec::new();
    multisets(&pairs, e, 0, &mut Vec::new(), &mut all);
    let perms = permutations(n);
    let mut keys = BTreeSet::new();
    for edges in all {
        let mut valency = vec![0; n];
        for &(s, t) in &edges {
            valency[s] += 1;
            valency[t] += 1;
        }
        if valency.iter().any(|&d| d < 3) {
            continue;
        }
        if let Some((_, key)) = canon(n, &edges, &perms) {
            keys.insert(key);
        }
    }
    keys.into_iter().collect()
}

pub fn parse_key(key: &str) -> (usize, Edges) {
    let mut parts = key.splitn(3, ':');
    let n: usize = parts.next().unwrap().parse().unwrap();
    let _e: usize = parts.next().unwrap().parse().unwrap();
    let edges = parts
        .next()
        .unwrap()
        .split(')')
        .filter(|c| !c.is_empty())
        .map(|c| {
            let (a, b) = c.trim_start_matches('(').split_once(',').unwrap();
            (a.parse::<usize>().unwrap() - 1, b.parse::<usize>().unwrap() - 1)
        })
        .collect();
    (n, edges)
}

/// The differential: for ordered half-edges `h1`, `h2` on distinct edges,
/// reconnect to `v(h1) -> v(h̄2)` and `v(h2) -> v(h̄1)`, then contract the
/// first new edge.
pub fn differential(n: usize, edges: &Edges, perms: &[Vec<usize>]) -> BTreeMap<String, i64> {
    let mut out = BTreeMap::new();
    let vertex = |h: usize| if h.is_multiple_of(2) { edges[h / 2].0 } else { edges[h / 2].1 };
    for h1 in 0..2 * edges.len() {
        for h2 in 0..2 * edges.len() {
            if h1 / 2 == h2 / 2 {
                continue;
            }
            let mut sign = if (h1 % 2 == 1) != (h2 % 2 == 1) { -1 } else { 1 };
            let (a, b) = (vertex(h1), vertex(h1 ^ 1));
            let (c, d) = (vertex(h2), vertex(h2 ^ 1));
            if a == d {
                continue;
            }
            let mut sigma = vec![usize::MAX; n];
            sigma[a] = 0;
            sigma[d] = 1;
            let mut next = 2;
            for s in sigma.iter_mut() {
                if *s == usize::MAX {
                    *s = next;
                    next += 1;
                }
            }
            sign *= inversion_sign(&sigma);
            let image = |v: usize| sigma[v].saturating_sub(1);
            let mut new_edges: Edges = edges
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != h1 / 2 && i != h2 / 2)
                .map(|(_, &(s, t))| (image(s), image(t)))
                .collect();
            new_edges.push((image(c), image(b)));
            if let Some((s, key)) = canon(n - 1, &new_edges, perms) {
                *out.entry(key).or_insert(0) += sign * s;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn matrix(source: &[String], target: &[String]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; source.len()]; target.len()];
    let Some(first) = source.first() else {
        return m;
    };
    let perms = permutations(parse_key(first).0 - 1);
    for (col, key) in source.iter().enumerate() {
        let (n, edges) = parse_key(key);
        for (image, coeff) in differential(n, &edges, &perms) {
            let row = target.iter().position(|k| *k == image).expect("image in target basis");
            m[row][col] = coeff;
        }
    }
    m
}

pub fn rank(m: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone() * inv.clone();
                for c in col..cols {
                    let delta = factor.clone() * rows[rank][c].clone();
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}
