//! Exact character theory for small finite groups of Lie type.

pub mod cache;
pub mod chartab;
pub mod classfun;
pub mod cyclo;
pub mod field;
pub mod group;
pub mod lie;
pub mod report;
