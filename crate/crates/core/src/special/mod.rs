pub mod gamma;
pub mod kummer;
pub mod pochhammer;
pub mod poly;
pub mod whittaker;
