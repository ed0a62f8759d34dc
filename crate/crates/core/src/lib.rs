pub mod gf;
pub mod kedlaya;
pub mod oracle;
pub mod zq;
