#pragma once

#include "ivpoly/floorcert/spec.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ivpoly::floorcert {

struct BuiltinInstance {
  std::string name;
  std::string source;  // spec DSL text
  FactorialRatioSpec spec;
  std::vector<std::string> order;
};

// -(2i-2)! (2m)! (2m-2i-2)! / (2 (i!)^2 (2i-1)! ((m-i)!)^2 (2m-2i-1)!),
// 0 < i < m; the value of frac1(m,m+1,i)/(6m(m-1)).
inline constexpr std::string_view kFrac1DiagSource = R"(# frac1 on the diagonal m = k - 1, 0 < i < m
vars i m
assume i > 0
assume m - i > 0
num 2i - 2
num 2m
num 2m - 2i - 2
den i
den i
den 2i - 1
den m - i
den m - i
den 2m - 2i - 1
pow2 -1
)";

// frac1(m,k,i)/(6m(m-1)C(i-1)) for m > k-1 >= i >= m+1-k >= 0.
inline constexpr std::string_view kFrac1GeneralSource = R"(# frac1 off the diagonal
vars k m i
assume m > k - 1
assume k - 1 >= i
assume i >= m + 1 - k
assume m + 1 - k >= 0
num i
num 2k - 2
num m
num 2m - 2i - 2
num 2m - 2k + 1
den 2i
den k - 1
den k - 1 - i
den m - i
den 2m - 2i - 1
den m - k + 1
den 2m - 2k
den i + k - m - 1
)";

// -(2k-2)! (m-2)! / (i! (k-1)! (k-1-i)! (m-i)! (m-k)! (i+k-m-1)!),
// m > k-1 >= i >= m+1-k > 0; the value of frac2(m,k,i)/(6m(m-1)).
inline constexpr std::string_view kFrac2Source = R"(# frac2
vars k m i
assume m > k - 1
assume k - 1 >= i
assume i >= m + 1 - k
assume m + 1 - k > 0
num 2k - 2
num m - 2
den i
den k - 1
den k - 1 - i
den m - i
den m - k
den i + k - m - 1
)";

inline std::vector<BuiltinInstance> builtin_instances() {
  std::vector<BuiltinInstance> out;
  out.push_back({"frac1-diag", std::string(kFrac1DiagSource), parse_spec(kFrac1DiagSource), {"i", "m"}});
  out.push_back({"frac1-general", std::string(kFrac1GeneralSource), parse_spec(kFrac1GeneralSource),
                 {"k", "m", "i"}});
  out.push_back({"frac2", std::string(kFrac2Source), parse_spec(kFrac2Source), {"k", "m", "i"}});
  return out;
}

inline std::optional<BuiltinInstance> find_builtin(std::string_view name) {
  for (auto& inst : builtin_instances())
    if (inst.name == name) return inst;
  return std::nullopt;
}

}  // namespace ivpoly::floorcert
