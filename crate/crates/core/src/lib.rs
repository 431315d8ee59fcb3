pub mod algebra;
pub mod cli;
pub mod cross_balance;
pub mod driver;
pub mod field;
pub mod oracle;
pub mod poly;
pub mod splitter;
pub mod square_balance;
