#include "subtile/rule.hpp"

#include <stdexcept>

namespace subtile {

namespace {

// Four unit squares that trade places under inflation by 2. The cyclic
// decoration makes the matrix 2I + P + P^3, which is primitive with
// spectrum {4, 2, 2, 0}: second modulus equal to lambda.
const char* square_text = R"(
lambda 2
group translations

tile 0 sq-a
v 0 0
v 1 0
v 1 1
v 0 1

tile 1 sq-b
v 0 0
v 1 0
v 1 1
v 0 1

tile 2 sq-c
v 0 0
v 1 0
v 1 1
v 0 1

tile 3 sq-d
v 0 0
v 1 0
v 1 1
v 0 1

sub 0
child 0 rot 0 dx 0 dy 0
child 1 rot 0 dx 1 dy 0
child 0 rot 0 dx 1 dy 1
child 3 rot 0 dx 0 dy 1

sub 1
child 1 rot 0 dx 0 dy 0
child 2 rot 0 dx 1 dy 0
child 1 rot 0 dx 1 dy 1
child 0 rot 0 dx 0 dy 1

sub 2
child 2 rot 0 dx 0 dy 0
child 3 rot 0 dx 1 dy 0
child 2 rot 0 dx 1 dy 1
child 1 rot 0 dx 0 dy 1

sub 3
child 3 rot 0 dx 0 dy 0
child 0 rot 0 dx 1 dy 0
child 3 rot 0 dx 1 dy 1
child 2 rot 0 dx 0 dy 1
)";

// Two dominoes; each inflates to a 2x4 block of four. All entries of
// the matrix are 2, so counts hit exact frequency at every level.
const char* table_text = R"(
lambda 2
group translations

tile 0 tall
v 0 0
v 1 0
v 1 2
v 0 2

tile 1 wide
v 0 0
v 2 0
v 2 1
v 0 1

sub 0
child 0 rot 0 dx 0 dy 0
child 0 rot 0 dx 1 dy 0
child 1 rot 0 dx 0 dy 2
child 1 rot 0 dx 0 dy 3

sub 1
child 1 rot 0 dx 0 dy 0
child 1 rot 0 dx 0 dy 1
child 0 rot 0 dx 2 dy 0
child 0 rot 0 dx 3 dy 0
)";

// Right triangle with legs 1/sqrt(5) and 2/sqrt(5), hypotenuse 1, and
// its mirror image. Inflation by sqrt(5) cuts each into five copies,
// three of the opposite handedness, at rotations irrational against pi.
const char* pinwheel_text = R"(
lambda sqrt(5)
group direct

tile 0 pin
v 0 0
v 2/sqrt(5) 0
v 0 1/sqrt(5)

tile 1 pin-m
v 0 0
v 0 -1/sqrt(5)
v 2/sqrt(5) 0

sub 0
child 1 rot atan(2)-pi dx 2/5 dy 4/5
child 1 rot -atan(1/2) dx 1/5 dy 2/5
child 1 rot -atan(1/2) dx 6/5 dy 2/5
child 0 rot -atan(1/2) dx 1/5 dy 2/5
child 0 rot pi-atan(1/2) dx 6/5 dy 2/5

sub 1
child 0 rot pi-atan(2) dx 2/5 dy -4/5
child 0 rot atan(1/2) dx 1/5 dy -2/5
child 0 rot atan(1/2) dx 6/5 dy -2/5
child 1 rot atan(1/2) dx 1/5 dy -2/5
child 1 rot atan(1/2)-pi dx 6/5 dy -2/5
)";

// Golden gnomon (apex 3*pi/5) and acute golden triangle (apex pi/5),
// inflated by the golden ratio. The gnomon splits into two gnomons and
// one acute triangle, the acute one into one of each. Both prototiles
// are mirror-symmetric, so a reflected placement occupies the same
// point set as its half-turn rotation; the reflect marks choose which
// decorated type each child carries.
const char* penrose2_text = R"(
lambda golden
group all

tile 0 fat
v -sin(3*pi/10) 0
v sin(3*pi/10) 0
v 0 cos(3*pi/10)

tile 1 thin
v -sin(pi/10) 0
v sin(pi/10) 0
v 0 cos(pi/10)

sub 0
child 0 rot -4*pi/5 dx -golden*golden/4 dy golden*cos(3*pi/10)/2
child 1 rot 4*pi/5 dx 1/4 dy golden*cos(pi/10)/2
child 0 rot pi reflect dx 1/2 dy 0

sub 1
child 1 rot -3*pi/5 dx -(1/2+sin(pi/10))/2 dy cos(3*pi/10)/2
child 0 rot -2*pi/5 reflect dx 1/4 dy golden*cos(pi/10)/2
)";

const std::vector<std::string> rule_names = {
    "square", "table", "pinwheel", "penrose2", "penrose40"};
const std::vector<std::string> matrix_names = {
    "square", "table", "pinwheel", "penrose2", "penrose40", "rauzy"};

}  // namespace

const std::vector<std::string>& builtin_rule_names() { return rule_names; }

bool is_builtin_rule(const std::string& name) {
    for (const std::string& n : rule_names)
        if (n == name) return true;
    return false;
}

substitution_rule builtin_rule(const std::string& name) {
    if (name == "square") return parse_rule(square_text, name);
    if (name == "table") return parse_rule(table_text, name);
    if (name == "pinwheel") return parse_rule(pinwheel_text, name);
    if (name == "penrose2") return parse_rule(penrose2_text, name);
    if (name == "penrose40") {
        substitution_rule r = expand_group(builtin_rule("penrose2"), 20);
        r.name = name;
        return r;
    }
    throw std::invalid_argument("unknown builtin rule: " + name);
}

const std::vector<std::string>& builtin_matrix_names() { return matrix_names; }

bool is_builtin_matrix(const std::string& name) {
    for (const std::string& n : matrix_names)
        if (n == name) return true;
    return false;
}

intmatrix builtin_matrix(const std::string& name) {
    if (name == "rauzy")
        return intmatrix::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 1}});
    if (is_builtin_rule(name)) return substitution_matrix(builtin_rule(name));
    throw std::invalid_argument("unknown builtin matrix: " + name);
}

}  // namespace subtile
