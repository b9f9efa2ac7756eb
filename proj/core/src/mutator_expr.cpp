#include "chronicle/mutator_expr.hpp"

#include <cctype>

#include "chronicle/errors.hpp"
#include "chronicle/mutators.hpp"

namespace chronicle {

namespace {

class Parser {
  public:
    Parser(const std::string& text, const std::map<std::string, Dfa>& env)
        : text_(text), env_(env) {}

    Dfa parse() {
        Dfa result = expression();
        skip_space();
        if (pos_ != text_.size())
            fail("trailing input after expression");
        return minimize(result);
    }

  private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError("mutator expression error at position " +
                         std::to_string(pos_) + ": " + message);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(
                   static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c)) fail(std::string("expected '") + c + "'");
    }

    std::string identifier() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                c == '\'')
                ++pos_;
            else
                break;
        }
        if (pos_ == start) fail("expected a name");
        return text_.substr(start, pos_ - start);
    }

    int integer() {
        std::string tok = identifier();
        for (char c : tok)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                fail("expected an integer, got '" + tok + "'");
        return std::stoi(tok);
    }

    Dfa expression() {
        std::string name = identifier();
        skip_space();
        bool call = pos_ < text_.size() && text_[pos_] == '(';
        if (!call) {
            auto it = env_.find(name);
            if (it == env_.end()) fail("undefined name '" + name + "'");
            return it->second;
        }
        expect('(');
        if (name == "MS") {
            Dfa inner = expression();
            expect(')');
            return mutate_supersequence(inner);
        }
        if (name == "MI") {
            Dfa left = expression();
            expect(',');
            Dfa right = expression();
            expect(')');
            return mutate_intersection(left, right);
        }
        if (name == "ML") {
            Dfa inner = expression();
            expect(',');
            int k = integer();
            expect(')');
            return mutate_levenshtein(inner, k);
        }
        if (name == "MG") {
            Dfa inner = expression();
            expect(',');
            std::string event = identifier();
            expect(',');
            std::string better = identifier();
            expect(',');
            int k = integer();
            expect(')');
            return mutate_good_shots(inner, event, better, k);
        }
        fail("unknown mutator '" + name + "' (expected MS, MI, ML, or MG)");
    }

    const std::string& text_;
    const std::map<std::string, Dfa>& env_;
    std::size_t pos_ = 0;
};

}  // namespace

Dfa parse_mutator_expression(const std::string& text,
                             const std::map<std::string, Dfa>& env) {
    return Parser(text, env).parse();
}

}  // namespace chronicle
