mod common;

use std::collections::HashMap;

use common::golden::{GOLDEN, MAX_E, MAX_V};
use common::oracle;
use graphcx::corpus::{differential_matrix, enumerate_graphs, Bidegree, Complex, Filter};

fn in_range(v: u32, e: usize) -> bool {
    v <= MAX_V && e <= MAX_E
}

#[test]
fn oracle_reproduces_golden_table() {
    let mut bases = HashMap::new();
    for &(v, e, ..) in GOLDEN {
        bases.insert((v, e), oracle::basis(v as usize, e));
    }
    let rank_out = |v: u32, e: usize| -> usize {
        let source = &bases[&(v, e)];
        match bases.get(&(v - 1, e - 1)) {
            Some(target) if !source.is_empty() => oracle::rank(&oracle::matrix(source, target)),
            _ => 0,
        }
    };
    for &(v, e, dim, out, betti) in GOLDEN {
        assert_eq!(bases[&(v, e)].len(), dim, "dim ({v},{e})");
        assert_eq!(rank_out(v, e), out, "rank ({v},{e})");
        let incoming = in_range(v + 1, e + 1).then(|| {
            if bases.contains_key(&(v + 1, e + 1)) {
                rank_out(v + 1, e + 1)
            } else {
                0
            }
        });
        assert_eq!(incoming.map(|r| dim - out - r), betti, "betti ({v},{e})");
    }
}

#[test]
fn library_matches_golden_table() {
    let complex = Complex::build(MAX_V, MAX_E).unwrap();
    let rows = complex.homology();
    assert_eq!(rows.len(), GOLDEN.len());
    for (row, &(v, e, dim, out, betti)) in rows.iter().zip(GOLDEN) {
        assert_eq!(row.bidegree, Bidegree::new(v, e));
        assert_eq!((row.dim, row.rank_out, row.betti), (dim, out, betti), "({v},{e})");
    }
}

#[test]
fn library_bases_and_matrices_match_oracle() {
    for v in 3..=5u32 {
        for e in 5..=9usize {
            let b = Bidegree::new(v, e);
            let below = b.below().unwrap();
            if !b.admits_graphs() || !below.admits_graphs() {
                continue;
            }
            let source = enumerate_graphs(v, e, Filter::ALL);
            let target = enumerate_graphs(v - 1, e - 1, Filter::ALL);
            let naive_source = oracle::basis(v as usize, e);
            let naive_target = oracle::basis(v as usize - 1, e - 1);
            let keys = |basis: &graphcx::corpus::Basis| -> Vec<String> {
                basis.keys.iter().map(ToString::to_string).collect()
            };
            assert_eq!(keys(&source), naive_source, "basis ({v},{e})");
            assert_eq!(keys(&target), naive_target);
            let m = differential_matrix(&source, &target).unwrap();
            let naive = oracle::matrix(&naive_source, &naive_target);
            for (r, row) in naive.iter().enumerate() {
                for (c, &x) in row.iter().enumerate() {
                    assert_eq!(m.get(r, c), x, "entry ({r},{c}) at ({v},{e})");
                }
            }
        }
    }
}

#[test]
fn consecutive_differentials_compose_to_zero() {
    let complex = Complex::build(MAX_V, MAX_E).unwrap();
    let squares = complex.squares();
    assert!(!squares.is_empty());
    for (b, m) in squares {
        assert!(m.is_zero(), "d∘d at {b}");
    }
}
