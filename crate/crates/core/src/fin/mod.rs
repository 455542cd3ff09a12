//! Elements of FIN_k(n), tetris operations, block sequences and spans.

mod block;
mod element;
mod opvec;
mod span;
mod term;

pub use block::{enumerate_block_sequences, unit_blocks, BlockSequence};
pub use element::{enumerate_elements, ElementIter, FinElement};
pub use opvec::{all_full, all_upper, vec_minus_one, vec_plus_one, OpKind, OpVector, ValueMap};
pub use span::{
    block_tuples, combined_span, combined_span_d, monochromatic, span, span_d, span_monochromatic, SpanQuery,
    SpanSelector, SpanSet,
};
pub use term::{t1_shift_terms, Shift, Term, TermRepr};
