//! Acceptance checks for `slitwave`; see `tests/acceptance.rs`.
