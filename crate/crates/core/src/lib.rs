pub mod cli;
pub mod code;
pub mod decoder;
pub mod gf2;
pub mod oracle;
pub mod pauli;
pub mod sim;
pub mod trellis;
