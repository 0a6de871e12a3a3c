#pragma once

#include <string>
#include <vector>

namespace qg {

/// Truncation-bounded verdict on one identity: exact within (h^{order+1},
/// degree+1) on the stated domain, never a claim beyond the window.
struct Certificate {
  std::string claim;
  std::string tag;  // stable identity slug, serialized as "paper_ref"
  int order = 0;
  int degree = 0;
  bool pass = true;
  std::string witness;  // first failing case, empty on pass

  struct Row {
    int n = 0;
    std::string valuation;
    std::string witness;
  };
  std::vector<Row> rows;

  void fail(const std::string& w) {
    if (pass) witness = w;
    pass = false;
  }
  void merge(const Certificate& o) {
    if (!o.pass && pass) witness = o.claim + ": " + o.witness;
    pass = pass && o.pass;
  }
};

}  // namespace qg
