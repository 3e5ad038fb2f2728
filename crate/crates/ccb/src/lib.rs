pub mod error;
pub mod field;
pub mod linalg;
pub mod partition;
pub mod tensor;
pub mod decompose;
pub mod caps;
pub mod boolfn;
pub mod protocol;
pub mod cover;
pub mod formulas;
pub mod fooling;
pub mod latin;
pub mod relation;
pub mod report;
pub mod textio;
pub mod verify;
pub mod cli;
