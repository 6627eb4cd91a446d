use pyqtrellis::{parse_marginal, parse_mode};
use qtrellis::decoder::{DecodeMode, MarginalModel};

#[test]
fn option_strings() {
    assert_eq!(parse_mode("css"), Ok(DecodeMode::Css));
    assert_eq!(parse_mode("ndml"), Ok(DecodeMode::Ndml));
    assert!(parse_mode("map").is_err());
    assert_eq!(parse_marginal("exact"), Ok(MarginalModel::Exact));
    assert!(parse_marginal("").is_err());
}
