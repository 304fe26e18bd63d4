#ifndef DEPMT_TOY_DATA_HPP_
#define DEPMT_TOY_DATA_HPP_

#include <string>

namespace depmt {

// Bundled English-to-French toy corpus and recognizer output, embedded so
// the verify command needs no file paths. The files under data/ carry the
// same bytes.
const std::string& toy_bitext_text();
const std::string& toy_nbest_text();

}  // namespace depmt

#endif  // DEPMT_TOY_DATA_HPP_
