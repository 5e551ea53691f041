//! Built-in fixture battery.

use crate::error::Result;
use crate::groupfile::{parse_group_file, LoadedGroup};

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub file: &'static str,
    pub text: &'static str,
    /// Whether the input is `D ⋊ E` with `D` abelian Sylow and `E` acting freely.
    pub frobenius: bool,
}

impl Fixture {
    pub fn load(&self) -> Result<LoadedGroup> {
        parse_group_file(self.text)?.load()
    }
}

macro_rules! fixture {
    ($file:literal, $frob:expr) => {
        Fixture {
            file: $file,
            text: include_str!(concat!("../fixtures/", $file)),
            frobenius: $frob,
        }
    };
}

/// The acceptance battery: six Frobenius inputs, `C3`, and the negative `S4` input.
pub const BATTERY: [Fixture; 8] = [
    fixture!("s3.grp", true),
    fixture!("a4.grp", true),
    fixture!("c5c4.grp", true),
    fixture!("c7c3.grp", true),
    fixture!("c3sq_c8.grp", true),
    fixture!("c2cube_c7.grp", true),
    fixture!("c3.grp", true),
    fixture!("s4.grp", false),
];

/// Relabeled presentations used for isomorphism-invariance checks.
pub const RELABELED: [Fixture; 2] = [
    fixture!("s3_relabeled.grp", true),
    fixture!("c5c4_points.grp", true),
];

pub fn by_file(file: &str) -> Option<Fixture> {
    BATTERY.iter().chain(&RELABELED).find(|f| f.file == file).copied()
}
