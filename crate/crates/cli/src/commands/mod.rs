pub mod cg_table;
pub mod decay;
pub mod dump;
pub mod spectrum;
pub mod verify;
