#include "subtile/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace subtile {

namespace {

class parser {
  public:
    explicit parser(std::string_view text) : text_(text) {}

    double run() {
        double v = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return v;
    }

  private:
    std::string_view text_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        throw expr_error(msg, static_cast<int>(pos_) + 1);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double expr() {
        double v = term();
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }

    double term() {
        double v = factor();
        for (;;) {
            if (eat('*')) {
                v *= factor();
            } else if (eat('/')) {
                size_t at = pos_;
                double d = factor();
                if (d == 0.0) {
                    pos_ = at;
                    fail("division by zero");
                }
                v /= d;
            } else {
                return v;
            }
        }
    }

    double factor() {
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        return primary();
    }

    double primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            double v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return name();
        fail(std::string("unexpected character '") + c + "'");
    }

    double number() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        // exponent suffix, so serialized coordinates like 7.2e-17 read back
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t mark = pos_ + 1;
            if (mark < text_.size() && (text_[mark] == '+' || text_[mark] == '-')) ++mark;
            if (mark < text_.size() && std::isdigit(static_cast<unsigned char>(text_[mark]))) {
                pos_ = mark;
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
        }
        std::string tok(text_.substr(start, pos_ - start));
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) {
            pos_ = start;
            fail("malformed number '" + tok + "'");
        }
        return v;
    }

    double name() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               std::isalpha(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        std::string tok(text_.substr(start, pos_ - start));
        if (tok == "pi") return M_PI;
        if (tok == "golden") return 0.5 * (1.0 + std::sqrt(5.0));
        double (*fn)(double) = nullptr;
        if (tok == "sqrt") fn = std::sqrt;
        else if (tok == "sin") fn = std::sin;
        else if (tok == "cos") fn = std::cos;
        else if (tok == "atan") fn = std::atan;
        if (!fn) {
            pos_ = start;
            fail("unknown name '" + tok + "'");
        }
        if (!eat('(')) fail("expected '(' after '" + tok + "'");
        size_t at = pos_;
        double arg = expr();
        if (!eat(')')) fail("expected ')'");
        if (tok == "sqrt" && arg < 0.0) {
            pos_ = at;
            fail("sqrt of a negative value");
        }
        return fn(arg);
    }
};

}  // namespace

double eval_expr(std::string_view text) {
    parser p(text);
    return p.run();
}

}  // namespace subtile
