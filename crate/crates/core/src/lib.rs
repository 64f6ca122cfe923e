pub mod bitcore;
pub mod cache;
pub mod cli;
pub mod complexity;
pub mod config;
pub mod experiments;
pub mod kraft;
pub mod prng;
pub mod randomness;
pub mod semimeasure;
pub mod toyvm;
