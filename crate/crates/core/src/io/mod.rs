//! File formats: SVM-Light text models and examples, and the binary SoC
//! data-file triple.

pub mod soc;
pub mod svmlight;

pub use soc::{export_soc_files, import_soc_files, SocFiles};
pub use svmlight::{
    parse_examples, parse_instance_line, parse_model_file, write_instance_line, write_model_file,
    ExampleLine,
};
