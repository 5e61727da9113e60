//! The three worked frames used throughout the tests and the README.
//!
//! * `E1`: `d/dx, x d/dy, y^2 d/dz` on ℝ³ (nilpotent case).
//! * `E2`: a frame on ℝ⁴ where a field vanishing at the origin can end up
//!   inside the ideal generated by the others.
//! * `E3`: a frame on ℝ⁵ whose order-zero fields span a copy of 𝔰𝔩₂.

use crate::field::Frame;
use crate::frontend::parse::parse_frame;

pub const E1: &str = include_str!("../fixtures/e1.ars");
pub const E2: &str = include_str!("../fixtures/e2.ars");
pub const E3: &str = include_str!("../fixtures/e3.ars");

fn load(text: &str) -> Frame {
    parse_frame(text)
        .and_then(|doc| doc.to_frame())
        .expect("bundled fixture parses")
}

pub fn e1() -> Frame {
    load(E1)
}

pub fn e2() -> Frame {
    load(E2)
}

pub fn e3() -> Frame {
    load(E3)
}
