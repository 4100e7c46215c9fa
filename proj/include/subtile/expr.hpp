#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

// Tiny arithmetic language for rule files, so vertices like
// (sin(pi/10), 0) stay exact to double precision instead of being
// truncated decimals.
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := ('-' | '+') factor | primary
//   primary := number | 'pi' | 'golden' | name '(' expr ')' | '(' expr ')'
//   name    := sqrt | sin | cos | atan
//
// golden is (1 + sqrt 5) / 2.

namespace subtile {

struct expr_error : std::runtime_error {
    int column;  // 1-based offset into the expression text
    expr_error(const std::string& msg, int col)
        : std::runtime_error(msg), column(col) {}
};

double eval_expr(std::string_view text);

}  // namespace subtile
