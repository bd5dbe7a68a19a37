pub mod cross;
pub mod hopf;
pub mod io;
pub mod linear;
pub mod scalar;
pub mod sweedler;
pub mod tensor;
pub mod twist;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/tensors.md")]
    mod tensors {}
    #[doc = include_str!("../../../book/src/hopf.md")]
    mod hopf {}
    #[doc = include_str!("../../../book/src/sweedler.md")]
    mod sweedler {}
    #[doc = include_str!("../../../book/src/twists.md")]
    mod twists {}
    #[doc = include_str!("../../../book/src/cross.md")]
    mod cross {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
