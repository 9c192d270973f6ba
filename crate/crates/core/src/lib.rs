pub mod deauto;
pub mod degrees;
pub mod growth;
pub mod lattice;
pub mod reproduce;
pub mod symcore;
