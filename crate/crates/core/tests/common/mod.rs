pub mod qubit;
