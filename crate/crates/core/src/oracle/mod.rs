//! Finite Routley-Meyer frames and brute-force checking.

pub mod algebra;
mod check;
mod frame;

pub use algebra::{complex_algebra_eval, domain, extension, Valuation};
pub use check::{
    correspondence_check, correspondence_check_in, eval_formula, frame_valid, qi_equivalent, qi_valid, FrameClass,
    Report,
};
pub use frame::{
    brute_force_frames, check_frame, enumerate_antichain_frames, enumerate_frames, frame_from_bits, FrameStream,
    RmFrame, MAX_ENUM_SIZE,
};
