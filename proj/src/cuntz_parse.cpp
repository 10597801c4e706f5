#include <cctype>

#include "opalg/cuntz.hpp"
#include "opalg/error.hpp"

namespace opalg::cuntz {

namespace {

class Parser {
public:
    Parser(const std::string& text, int d) : s_(text), d_(d) {}

    Polynomial run() {
        skip();
        Polynomial p = expr();
        skip();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
            if (s_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    bool starts_factor() const {
        const char c = peek();
        return c == 's' || c == 'i' || c == '(' || c == '.' || std::isdigit(static_cast<unsigned char>(c));
    }

    Polynomial expr() {
        Polynomial p = term();
        while (true) {
            skip();
            const char c = peek();
            if (c != '+' && c != '-') return p;
            ++pos_;
            skip();
            Polynomial t = term();
            p = c == '+' ? p + t : p - t;
        }
    }

    Polynomial term() {
        bool negate = false;
        while (peek() == '-') {
            negate = !negate;
            ++pos_;
            skip();
        }
        if (!starts_factor()) fail(pos_ < s_.size() ? "expected an operand" : "unexpected end of expression");
        Polynomial p = factor();
        while (true) {
            skip();
            if (!starts_factor()) break;
            p = multiply(p, factor());
        }
        return negate ? p.scaled(-1) : p;
    }

    Polynomial factor() {
        Polynomial p = atom();
        while (peek() == '*') {
            ++pos_;
            p = p.adjoint();
        }
        return p;
    }

    std::string digits() {
        std::string out;
        while (std::isdigit(static_cast<unsigned char>(peek()))) out += s_[pos_++];
        return out;
    }

    Polynomial atom() {
        const char c = peek();
        if (c == 's') {
            ++pos_;
            const std::size_t at = pos_;
            const std::string k = digits();
            if (k.empty()) fail("expected a generator index after 's'");
            if (k.size() > 6 || std::stoi(k) < 1 || std::stoi(k) > d_) {
                pos_ = at - 1;
                fail("generator index " + k + " outside 1.." + std::to_string(d_));
            }
            return Polynomial::generator(d_, std::stoi(k));
        }
        if (c == 'i') {
            ++pos_;
            return Polynomial::one(d_).scaled(Coefficient(0, 1));
        }
        if (c == '(') {
            ++pos_;
            skip();
            Polynomial p = expr();
            skip();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return p;
        }
        Rational value = number();
        if (peek() == 'i') {
            ++pos_;
            return Polynomial::one(d_).scaled(Coefficient(0, value));
        }
        return Polynomial::one(d_).scaled(Coefficient(value));
    }

    // cpp_int reads a leading 0 as octal
    static boost::multiprecision::cpp_int decimal(const std::string& text) {
        const auto nz = text.find_first_not_of('0');
        return nz == std::string::npos ? 0 : boost::multiprecision::cpp_int(text.substr(nz));
    }

    Rational number() {
        using boost::multiprecision::cpp_int;
        std::string whole = digits();
        std::string frac;
        if (peek() == '.') {
            ++pos_;
            frac = digits();
        }
        if (whole.empty() && frac.empty()) fail("expected a number");
        cpp_int scale = 1;
        for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
        Rational value(decimal(whole + frac), scale);
        if (peek() == '/') {
            ++pos_;
            const std::string den = digits();
            if (den.empty()) fail("expected a denominator");
            const cpp_int q = decimal(den);
            if (q == 0) fail("division by zero");
            value /= Rational(q);
        }
        return value;
    }

    const std::string& s_;
    int d_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse(const std::string& text, int d) {
    if (d < 1) throw PreconditionError("Cuntz algebra needs d >= 1");
    return Parser(text, d).run();
}

}  // namespace opalg::cuntz
