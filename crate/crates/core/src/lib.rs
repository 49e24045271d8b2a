pub mod algebra;
pub mod catalog;
pub mod steenrod;
pub mod sullivan;
pub mod whitehead;
