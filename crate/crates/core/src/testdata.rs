//! Published sequences shared by tests across modules.

/// Degree sequence of the counterexample matrix, indexed from N = 0.
pub const COUNTEREXAMPLE_DEGREES: [i64; 21] = [
    1, 2, 3, 4, 6, 9, 12, 17, 25, 33, 45, 65, 85, 112, 159, 215, 262, 365, 524, 627, 833,
];

/// The chamber functional c_N of the counterexample, indexed from N = 0.
pub const COUNTEREXAMPLE_CN: [i64; 21] = [
    -2, 2, 1, -5, 6, 0, -11, 17, -6, -22, 45, -29, -38, 112, -103, -47, 262, -318, 9, 571, -898,
];

/// Degree sequence of the Scott map for N = 1..8.
pub const SCOTT_DEGREES: [i64; 8] = [2, 4, 8, 14, 24, 40, 66, 108];
