pub mod compiler;
pub mod count;
pub mod family;
pub mod game;
pub mod ordinal;
pub mod space;
pub mod structure;
pub mod topology;
pub mod word;
