#include "ttconvex/fixtures.hpp"

#include "ttconvex/error.hpp"

namespace ttconvex::fixtures {

namespace {

constexpr std::string_view kF6 = R"([automorphism]
generators = a b c d x y
a -> a
b -> b a
c -> c a a
d -> d c
x -> y
y -> x c y

[inverse]
generators = a b c d x y
a -> a
b -> b a'
c -> c a' a'
d -> d a a c'
x -> y x' a a c'
y -> x

[filtration]
stratum 1 = a
stratum 2 = b
stratum 3 = c
stratum 4 = d
stratum 5 = x y
)";

constexpr std::string_view kPsiF4 = R"([automorphism]
generators = a b c d
a -> a
b -> b a
c -> c a
d -> d c b'

[inverse]
generators = a b c d
a -> a
b -> b a'
c -> c a'
d -> d b c'

[filtration]
stratum 1 = a
stratum 2 = b
stratum 3 = c
stratum 4 = d
)";

constexpr std::string_view kEglinear = R"([automorphism]
generators = a x y
a -> a x y x' y'
x -> y'
y -> y x

[inverse]
generators = a x y
a -> a y x y' x'
x -> x y
y -> x'

[filtration]
stratum 1 = x y
stratum 2 = a
)";

constexpr std::string_view kIdentity = R"([automorphism]
generators = a b c
a -> a
b -> b
c -> c

[inverse]
generators = a b c
a -> a
b -> b
c -> c

[filtration]
stratum 1 = a
stratum 2 = b
stratum 3 = c
)";

}  // namespace

Automorphism f6() { return parse_automorphism(kF6); }
Automorphism psi_f4() { return parse_automorphism(kPsiF4); }
Automorphism eglinear() { return parse_automorphism(kEglinear); }

Automorphism identity(std::size_t rank) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rank; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return Automorphism::identity(Alphabet(std::move(names)));
}

std::string text(std::string_view name) {
  if (name == "f6") return std::string(kF6);
  if (name == "psi_f4") return std::string(kPsiF4);
  if (name == "eglinear") return std::string(kEglinear);
  if (name == "identity") return std::string(kIdentity);
  throw ConfigError("unknown fixture '" + std::string(name) + "'");
}

Automorphism by_name(std::string_view name) { return parse_automorphism(text(name)); }

std::vector<std::string> names() { return {"f6", "psi_f4", "eglinear", "identity"}; }

}  // namespace ttconvex::fixtures
