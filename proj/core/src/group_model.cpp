#include "hypstab/group_model.hpp"

#include <cctype>
#include <charconv>

#include "hypstab/errors.hpp"

namespace hypstab {

GroupModel::GroupModel(ModelKind kind, int parameter) : kind_(kind), parameter_(parameter) {
  if (kind == ModelKind::Free) {
    if (parameter < 2 || parameter > kMaxFreeRank) {
      throw InvalidInput("free group rank must be in [2, " + std::to_string(kMaxFreeRank) + "]");
    }
    num_generators_ = parameter;
    return;
  }
  if (parameter < 2 || parameter > kMaxGenus) {
    throw InvalidInput("surface group genus must be in [2, " + std::to_string(kMaxGenus) + "]");
  }
  num_generators_ = 2 * parameter;
  Word rel;
  for (int j = 1; j <= parameter; ++j) {
    const auto a = static_cast<Letter>(2 * j - 1);
    const auto b = static_cast<Letter>(2 * j);
    rel.push_back(a);
    rel.push_back(b);
    rel.push_back(inverse(a));
    rel.push_back(inverse(b));
  }
  position_.assign(static_cast<std::size_t>(degree()), -1);
  for (std::size_t i = 0; i < rel.size(); ++i) {
    position_[static_cast<std::size_t>(letter_rank(rel[i]))] = static_cast<int>(i);
  }
  relators_.push_back(std::move(rel));
}

GroupModel GroupModel::free_group(int rank) { return GroupModel(ModelKind::Free, rank); }
GroupModel GroupModel::surface_group(int genus) { return GroupModel(ModelKind::Surface, genus); }

GroupModel GroupModel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidInput("model spec must look like free:2 or surface:2, got '" + std::string(spec) + "'");
  }
  const auto name = spec.substr(0, colon);
  const auto num = spec.substr(colon + 1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
  if (ec != std::errc() || ptr != num.data() + num.size()) {
    throw InvalidInput("model parameter is not an integer: '" + std::string(spec) + "'");
  }
  if (name == "free") return free_group(value);
  if (name == "surface") return surface_group(value);
  throw InvalidInput("unsupported model '" + std::string(name) + "'");
}

std::string GroupModel::spec() const {
  return (is_free() ? "free:" : "surface:") + std::to_string(parameter_);
}

std::string GroupModel::letter_name(Letter x) const {
  const int g = x > 0 ? x : -x;
  std::string name;
  if (is_free()) {
    name.push_back(static_cast<char>('a' + g - 1));
  } else {
    name.push_back(g % 2 == 1 ? 'a' : 'b');
    name += std::to_string((g + 1) / 2);
  }
  if (x < 0) name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  return name;
}

std::string GroupModel::format(const Word& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += letter_name(w[i]);
  }
  return out;
}

Word GroupModel::parse_word(std::string_view text) const {
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '.' || c == '*') {
      ++i;
      continue;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      throw InvalidInput("unexpected character '" + std::string(1, c) + "' in word '" + std::string(text) + "'");
    }
    const bool inv = std::isupper(static_cast<unsigned char>(c)) != 0;
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    ++i;
    int index = 1;
    const std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) {
      std::from_chars(text.data() + start, text.data() + i, index);
    }
    int gen = 0;
    if (is_free()) {
      if (index != 1) throw InvalidInput("free group letters take no index: '" + std::string(text) + "'");
      gen = lower - 'a' + 1;
    } else {
      if (lower != 'a' && lower != 'b') {
        throw InvalidInput("surface group letters are a<j>/b<j>: '" + std::string(text) + "'");
      }
      gen = 2 * index - (lower == 'a' ? 1 : 0);
    }
    if (gen < 1 || gen > num_generators_ || index < 1) {
      throw InvalidInput("generator out of range in '" + std::string(text) + "' for model " + spec());
    }
    w.push_back(static_cast<Letter>(inv ? -gen : gen));
  }
  return w;
}

Word GroupModel::dehn_reduce(const Word& w) const {
  if (is_free()) return free_reduce(w);

  const Word& rel = relators_.front();
  const int n = static_cast<int>(rel.size());
  const int half = n / 2;
  std::vector<Letter> stack;
  stack.reserve(w.size());
  std::vector<Letter> pending(w.rbegin(), w.rend());

  // The relator r and r^-1, read cyclically.  In r^-1 the letter x sits at
  // the mirror image of where x^-1 sits in r.
  auto rel_at = [&](bool inverted, int pos) -> Letter {
    pos = ((pos % n) + n) % n;
    return inverted ? inverse(rel[static_cast<std::size_t>(n - 1 - pos)]) : rel[static_cast<std::size_t>(pos)];
  };
  auto pos_of = [&](bool inverted, Letter x) -> int {
    if (!inverted) return position_[static_cast<std::size_t>(letter_rank(x))];
    return n - 1 - position_[static_cast<std::size_t>(letter_rank(inverse(x)))];
  };

  while (!pending.empty()) {
    const Letter x = pending.back();
    pending.pop_back();
    if (!stack.empty() && stack.back() == inverse(x)) {
      stack.pop_back();
      continue;
    }
    stack.push_back(x);
    // Longest suffix of the stack that is a cyclic subword of r or r^-1
    // ending in x.  Each letter occurs once in each, so there are two
    // candidate alignments.
    for (bool inverted : {false, true}) {
      const int p = pos_of(inverted, x);
      int m = 1;
      const int s = static_cast<int>(stack.size());
      while (m < n && m < s && stack[static_cast<std::size_t>(s - 1 - m)] == rel_at(inverted, p - m)) ++m;
      if (m > half) {
        // Replace the piece u (length m) by the inverse of its complement.
        stack.resize(static_cast<std::size_t>(s - m));
        // complement v = letters p+1 .. p+(n-m); u = v^-1, push v^-1 via pending
        // (in order, so pending receives it reversed).
        for (int k = 1; k <= n - m; ++k) {
          pending.push_back(rel_at(inverted, p + k));
        }
        // pending is a stack: the next letter popped must be the first letter
        // of v^-1, i.e. inverse of v's last letter.  The loop above pushed
        // v's letters in order, so popping yields them last-first; invert each.
        for (std::size_t k = pending.size() - static_cast<std::size_t>(n - m); k < pending.size(); ++k) {
          pending[k] = inverse(pending[k]);
        }
        break;
      }
    }
  }
  return Word(std::move(stack));
}

bool GroupModel::is_trivial(const Word& w) const { return dehn_reduce(w).empty(); }

bool GroupModel::equal(const Word& u, const Word& v) const { return is_trivial(u.inverse() * v); }

Word GroupModel::multiply(const Word& u, const Word& v) const { return dehn_reduce(u * v); }

}  // namespace hypstab
