//! Deliberate defects used by the negative-control tests.
//!
//! Every public entry point runs with [`Faults::NONE`]; the `*_with` variants
//! on [`Engine`](crate::engine::Engine) accept other settings so the test
//! suites can confirm that the identity checks notice each defect.

use crate::involution::Bullet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Faults {
    /// Negate the block-shuffle sign of every marked splitting.
    pub flip_shuffle_sign: bool,
    /// Replace the block-shuffle sign by `+1`.
    pub drop_shuffle_sign: bool,
    /// Drop the sign of the relabeling that precedes a contraction.
    pub drop_contraction_sign: bool,
    /// Leave one membership condition of the proof set unchecked.
    pub skip_bullet: Option<Bullet>,
}

impl Faults {
    pub const NONE: Faults = Faults {
        flip_shuffle_sign: false,
        drop_shuffle_sign: false,
        drop_contraction_sign: false,
        skip_bullet: None,
    };

    pub fn skips(&self, bullet: Bullet) -> bool {
        self.skip_bullet == Some(bullet)
    }
}
