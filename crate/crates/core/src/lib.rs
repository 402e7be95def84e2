pub mod automata;
pub mod games;
pub mod graph;
pub mod objectives;
pub mod structuration;
pub mod lab;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/objectives.md")]
    mod objectives {}
    #[doc = include_str!("../../../book/src/automata.md")]
    mod automata {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/structuration.md")]
    mod structuration {}
    #[doc = include_str!("../../../book/src/lab.md")]
    mod lab {}
}
