//! Character expansions: seminormal representations, Weyl group character
//! tables, Molien series and the Fourier transform on unipotent characters.

pub mod fourier;
pub mod gomi;
pub mod molien;
pub mod partition;
pub mod seminormal;
pub mod wchar;

pub use fourier::{fourier_block, FourierBlock};
pub use gomi::{gomi_trace, gomi_trace_with};
pub use molien::{molien, molien_all, molien_dimension_sum, MolienSeries};
pub use partition::{bipartitions, partitions, BiPartition, Partition};
pub use seminormal::{
    char_value, hecke_character_table, seminormal_reps, HeckeCharacterTable, RatMatrix, SeminormalRep,
};
pub use wchar::{character_table, CharacterTable};
