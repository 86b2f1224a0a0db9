pub mod check;
pub mod fixtures;
pub mod corpus;
pub mod oracle;
