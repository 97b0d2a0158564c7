pub mod conespline;
pub mod hermitian;
pub mod localize;
pub mod oracle;
pub mod polycone;
pub mod polynomial;
pub mod rational;
pub mod verify;
