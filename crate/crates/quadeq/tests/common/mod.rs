#![allow(dead_code)]

pub mod instances;
pub mod lemma_checks;
pub mod orbit_bfs;
