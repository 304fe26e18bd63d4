#include "depmt/toy_data.hpp"

namespace depmt {

const std::string& toy_bitext_text() {
  static const std::string text =
      "1\tjohn\t2\tsubj\n"
      "2\tsees\t0\te\n"
      "3\tmary\t2\tobj\n"
      "---\n"
      "1\tjean\t2\tsuj\n"
      "2\tvoit\t0\te\n"
      "3\tmarie\t2\tobj\n"
      "===\n"
      "1\t1\n"
      "2\t2\n"
      "3\t3\n"
      "\n"
      "1\tjohn\t2\tsubj\n"
      "2\tsees\t0\te\n"
      "3\tmary\t2\tobj\n"
      "---\n"
      "1\tjean\t2\tsuj\n"
      "2\tregarde\t0\te\n"
      "3\tmarie\t2\tobj\n"
      "===\n"
      "1\t1\n"
      "2\t2\n"
      "3\t3\n"
      "\n"
      "1\tjohn\t2\tsubj\n"
      "2\tloves\t0\te\n"
      "3\tmary\t2\tobj\n"
      "---\n"
      "1\tjean\t2\tsuj\n"
      "2\taime\t0\te\n"
      "3\tmarie\t2\tobj\n"
      "===\n"
      "1\t1\n"
      "2\t2\n"
      "3\t3\n"
      "\n"
      "1\tmary\t2\tsubj\n"
      "2\tloves\t0\te\n"
      "3\tjohn\t2\tobj\n"
      "---\n"
      "1\tmarie\t2\tsuj\n"
      "2\taime\t0\te\n"
      "3\tjean\t2\tobj\n"
      "===\n"
      "1\t1\n"
      "2\t2\n"
      "3\t3\n"
      "\n"
      "1\tcat\t2\tsubj\n"
      "2\tloves\t0\te\n"
      "3\tdog\t2\tobj\n"
      "---\n"
      "1\tchat\t2\tsuj\n"
      "2\taime\t0\te\n"
      "3\tchien\t2\tobj\n"
      "===\n"
      "1\t1\n"
      "2\t2\n"
      "3\t3\n"
      "\n"
      "1\tdog\t2\tsubj\n"
      "2\tloves\t0\te\n"
      "3\tcat\t2\tobj\n"
      "---\n"
      "1\tchien\t2\tsuj\n"
      "2\taime\t0\te\n"
      "3\tchat\t2\tobj\n"
      "===\n"
      "1\t1\n"
      "2\t2\n"
      "3\t3\n"
      "\n"
      "1\tbig\t2\tmod\n"
      "2\tcat\t3\tsubj\n"
      "3\tloves\t0\te\n"
      "4\tjohn\t3\tobj\n"
      "---\n"
      "1\tchat\t3\tsuj\n"
      "2\tgrand\t1\tmod\n"
      "3\taime\t0\te\n"
      "4\tjean\t3\tobj\n"
      "===\n"
      "1\t2\n"
      "2\t1\n"
      "3\t3\n"
      "4\t4\n"
      "\n"
      "1\tmary\t2\tsubj\n"
      "2\tloves\t0\te\n"
      "3\tbig\t4\tmod\n"
      "4\tdog\t2\tobj\n"
      "---\n"
      "1\tmarie\t2\tsuj\n"
      "2\taime\t0\te\n"
      "3\tchien\t2\tobj\n"
      "4\tgrand\t3\tmod\n"
      "===\n"
      "1\t1\n"
      "2\t2\n"
      "3\t4\n"
      "4\t3\n"
      "\n"
      "1\tbig\t2\tmod\n"
      "2\tdog\t3\tsubj\n"
      "3\tloves\t0\te\n"
      "4\tbig\t5\tmod\n"
      "5\tcat\t3\tobj\n"
      "---\n"
      "1\tchien\t3\tsuj\n"
      "2\tgrand\t1\tmod\n"
      "3\taime\t0\te\n"
      "4\tchat\t3\tobj\n"
      "5\tgrand\t4\tmod\n"
      "===\n"
      "1\t2\n"
      "2\t1\n"
      "3\t3\n"
      "4\t5\n"
      "5\t4\n"
      "\n"
      "1\tcat\t2\tsubj\n"
      "2\tloves\t0\te\n"
      "3\tjohn\t2\tobj\n"
      "---\n"
      "1\tchat\t2\tsuj\n"
      "2\taime\t0\te\n"
      "3\tjean\t2\tobj\n"
      "===\n"
      "1\t1\n"
      "2\t2\n"
      "3\t3\n";
  return text;
}

const std::string& toy_nbest_text() {
  static const std::string text =
      "-1.203972804326\tjohn loves mary\n"
      "-2.302585092994\tmary loves john\n"
      "-1.609437912434\tjohn sees mary\n";
  return text;
}

}  // namespace depmt
