pub const MAX_V: u32 = 6;
pub const MAX_E: usize = 10;

/// `(V, E, dim, rank of d leaving, Betti)` for the complex cut at V <= 6,
/// E <= 10. Betti is `None` where the incoming differential is out of range.
/// Produced by the naive oracle in `common/oracle.rs`.
pub const GOLDEN: &[(u32, usize, usize, usize, Option<usize>)] = &[
    (2, 3, 1, 0, Some(1)),
    (2, 4, 0, 0, Some(0)),
    (2, 5, 1, 0, Some(0)),
    (2, 6, 0, 0, Some(0)),
    (2, 7, 1, 0, Some(0)),
    (2, 8, 0, 0, Some(0)),
    (2, 9, 1, 0, Some(0)),
    (2, 10, 0, 0, None),
    (3, 5, 1, 0, Some(0)),
    (3, 6, 1, 1, Some(0)),
    (3, 7, 4, 0, Some(0)),
    (3, 8, 3, 1, Some(0)),
    (3, 9, 8, 0, Some(0)),
    (3, 10, 6, 1, None),
    (4, 6, 3, 1, Some(2)),
    (4, 7, 0, 0, Some(0)),
    (4, 8, 16, 4, Some(1)),
    (4, 9, 20, 2, Some(0)),
    (4, 10, 63, 8, None),
    (5, 8, 4, 0, Some(0)),
    (5, 9, 20, 11, Some(1)),
    (5, 10, 112, 18, None),
    (6, 9, 7, 4, None),
    (6, 10, 15, 8, None),
];
