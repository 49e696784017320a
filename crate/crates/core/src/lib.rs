pub mod featgen;
pub mod mlcore;
pub mod oracle;
pub mod pipeline;
pub mod polysys;
pub mod projection;
pub mod seeds;
