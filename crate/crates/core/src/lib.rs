pub mod chartab;
pub mod cyclo;
pub mod grp;
pub mod lattice;
pub mod periodic;
pub mod repring;
