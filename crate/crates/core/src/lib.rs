pub mod exactlin;
pub mod virasoro;
pub mod qseries;
pub mod zhu;
pub mod griess;
