#include "repute/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "repute/errors.hpp"

namespace repute {

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<double> parse_real(std::string_view s) {
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = parse_real(s.substr(0, slash));
    auto den = parse_real(s.substr(slash + 1));
    if (!num || !den || *den == 0.0) return std::nullopt;
    return *num / *den;
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<long long> parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

enum class Section { None, Market, Scales, Good, Buyer, Seller, Schedule, Attack };

class Parser {
 public:
  Parser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  ScenarioConfig parse() {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      ++line_no;
      line_ = line_no;
      handle_line(text_.substr(pos, end - pos));
      if (end == text_.size()) break;
      pos = end + 1;
    }
    finish_scales();
    for (const auto& r : pending_repeats_) expand_repeat(r);
    for (auto& issue : cfg_.validation_issues()) errors_.push_back(std::move(issue));
    if (!errors_.empty()) throw ConfigError(std::move(errors_));
    return std::move(cfg_);
  }

 private:
  std::string where() const { return source_ + ":" + std::to_string(line_); }

  void error(const std::string& message) { errors_.push_back(where() + ": " + message); }

  template <typename T>
  bool get(std::optional<T> value, T& out, const std::string& what, std::string_view token) {
    if (!value) {
      error("expected " + what + ", got '" + std::string(token) + "'");
      return false;
    }
    out = *value;
    return true;
  }

  bool real(std::string_view token, double& out, const std::string& what = "a number") {
    return get(parse_real(token), out, what, token);
  }

  bool count(std::string_view token, std::size_t& out, const std::string& what = "a non-negative integer") {
    auto v = parse_integer(token);
    if (!v || *v < 0) {
      error("expected " + what + ", got '" + std::string(token) + "'");
      return false;
    }
    out = static_cast<std::size_t>(*v);
    return true;
  }

  bool levels(const std::vector<std::string>& tokens, std::size_t from, std::vector<int>& out) {
    out.clear();
    for (std::size_t i = from; i < tokens.size(); ++i) {
      auto v = parse_integer(tokens[i]);
      if (!v) {
        error("expected a level shift, got '" + tokens[i] + "'");
        return false;
      }
      out.push_back(static_cast<int>(*v));
    }
    if (out.empty()) {
      error("expected at least one level shift");
      return false;
    }
    return true;
  }

  bool quadruple(const std::vector<std::string>& tokens, std::size_t from, std::optional<Tfn>& out) {
    if (tokens.size() - from != 4) {
      error("a fuzzy number needs four components");
      return false;
    }
    double c[4];
    for (int k = 0; k < 4; ++k) {
      if (!real(tokens[from + k], c[k])) return false;
    }
    try {
      out = Tfn(c[0], c[1], c[2], c[3]);
    } catch (const Error& e) {
      error(e.what());
      return false;
    }
    return true;
  }

  void handle_line(std::string_view raw) {
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto all = split_ws(raw);
    if (all.empty()) return;

    if (all.front().front() == '[') {
      open_section(raw);
      return;
    }
    if (section_ == Section::Schedule) {
      schedule_line(all);
      return;
    }
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) {
      error("expected 'key = value'");
      return;
    }
    const auto lhs = split_ws(raw.substr(0, eq));
    const auto rhs = split_ws(raw.substr(eq + 1));
    if (lhs.empty()) {
      error("missing key before '='");
      return;
    }
    if (rhs.empty()) {
      error("missing value for '" + lhs.front() + "'");
      return;
    }
    switch (section_) {
      case Section::None:
        error("setting outside of any section");
        break;
      case Section::Market:
        market_line(lhs, rhs);
        break;
      case Section::Scales:
        scales_line(lhs, rhs);
        break;
      case Section::Good:
        good_line(lhs, rhs);
        break;
      case Section::Buyer:
        buyer_line(lhs, rhs);
        break;
      case Section::Seller:
        seller_line(lhs, rhs);
        break;
      case Section::Attack:
        attack_line(lhs, rhs);
        break;
      case Section::Schedule:
        break;
    }
  }

  void open_section(std::string_view raw) {
    const auto open = raw.find('[');
    const auto close = raw.find(']');
    if (close == std::string_view::npos || close < open) {
      error("unterminated section header");
      section_ = Section::None;
      return;
    }
    if (!split_ws(raw.substr(close + 1)).empty()) error("text after section header");
    const auto words = split_ws(raw.substr(open + 1, close - open - 1));
    if (words.empty()) {
      error("empty section header");
      section_ = Section::None;
      return;
    }
    const std::string& kind = words.front();
    const bool named = kind == "good" || kind == "buyer" || kind == "seller" || kind == "attack";
    if (named != (words.size() == 2) || words.size() > 2) {
      error(named ? "section [" + kind + "] needs exactly one name" : "section [" + kind + "] takes no name");
      section_ = Section::None;
      return;
    }
    const std::string entity = named ? kind + " " + words[1] : kind;
    cfg_.locations.try_emplace(entity, where());
    if (kind == "market") {
      section_ = Section::Market;
    } else if (kind == "scales") {
      section_ = Section::Scales;
    } else if (kind == "schedule") {
      section_ = Section::Schedule;
    } else if (kind == "good") {
      section_ = Section::Good;
      cfg_.goods.push_back({GoodId(words[1]), {}, WeightHistory::kDefaultWindow, WeightHistory::kDefaultDeltaRate});
    } else if (kind == "buyer") {
      section_ = Section::Buyer;
      cfg_.buyers.push_back({});
      cfg_.buyers.back().id = BuyerId(words[1]);
    } else if (kind == "seller") {
      section_ = Section::Seller;
      cfg_.sellers.push_back({});
      cfg_.sellers.back().id = SellerId(words[1]);
    } else if (kind == "attack") {
      section_ = Section::Attack;
      cfg_.attacks.push_back({});
      cfg_.attacks.back().name = words[1];
    } else {
      error("unknown section [" + kind + "]");
      section_ = Section::None;
    }
  }

  void expect_arity(const std::vector<std::string>& lhs, std::size_t n) {
    if (lhs.size() != n) error("'" + lhs.front() + "' takes " + std::to_string(n - 1) + " qualifier(s)");
  }

  void single_value(const std::vector<std::string>& lhs, const std::vector<std::string>& rhs) {
    expect_arity(lhs, 1);
    if (rhs.size() != 1) error("'" + lhs.front() + "' takes a single value");
  }

  void market_line(const std::vector<std::string>& lhs, const std::vector<std::string>& rhs) {
    const auto& key = lhs.front();
    single_value(lhs, rhs);
    if (key == "name") {
      cfg_.name = rhs.front();
    } else if (key == "seed") {
      auto v = parse_integer(rhs.front());
      if (!v || *v < 0) {
        error("expected a non-negative seed, got '" + rhs.front() + "'");
      } else {
        cfg_.seed = static_cast<std::uint64_t>(*v);
      }
    } else if (key == "steps") {
      count(rhs.front(), cfg_.steps);
    } else {
      error("unknown market setting '" + key + "'");
    }
  }

  void scales_line(const std::vector<std::string>& lhs, const std::vector<std::string>& rhs) {
    expect_arity(lhs, 2);
    if (lhs.size() != 2) return;
    std::optional<Tfn> q;
    if (!quadruple(rhs, 0, q)) return;
    try {
      if (lhs[0] == "importance") {
        importance_terms_[static_cast<std::size_t>(parse_importance_term(lhs[1]))] = q;
      } else if (lhs[0] == "performance") {
        performance_terms_[static_cast<std::size_t>(parse_performance_term(lhs[1]))] = q;
      } else {
        error("unknown scale '" + lhs[0] + "' (expected importance or performance)");
      }
    } catch (const LookupError& e) {
      error(e.what());
    }
    scale_line_ = where();
  }

  template <typename Scale>
  void finish_scale(const std::array<std::optional<Tfn>, kScaleSize>& terms, Scale& out, const char* name) {
    std::size_t given = 0;
    for (const auto& t : terms) given += t.has_value();
    if (given == 0) return;
    if (given != kScaleSize) {
      errors_.push_back(scale_line_ + ": " + name + " scale override needs all five terms");
      return;
    }
    std::array<Tfn, kScaleSize> values;
    for (std::size_t i = 0; i < kScaleSize; ++i) values[i] = *terms[i];
    try {
      out = Scale(values);
    } catch (const Error& e) {
      errors_.push_back(scale_line_ + ": " + e.what());
    }
  }

  void finish_scales() {
    finish_scale(importance_terms_, cfg_.importance_scale, "importance");
    finish_scale(performance_terms_, cfg_.performance_scale, "performance");
  }

  void good_line(const std::vector<std::string>& lhs, const std::vector<std::string>& rhs) {
    auto& g = cfg_.goods.back();
    const auto& key = lhs.front();
    if (key == "attributes") {
      expect_arity(lhs, 1);
      g.attributes = rhs;
      return;
    }
    single_value(lhs, rhs);
    if (key == "window") {
      count(rhs.front(), g.window);
    } else if (key == "delta_rate") {
      real(rhs.front(), g.delta_rate);
    } else {
      error("unknown good setting '" + key + "'");
    }
  }

  void buyer_line(const std::vector<std::string>& lhs, const std::vector<std::string>& rhs) {
    auto& b = cfg_.buyers.back();
    const auto& key = lhs.front();
    if (key == "compare") {
      expect_arity(lhs, 2);
      if (lhs.size() != 2) return;
      std::vector<PairwiseJudgement> judgements;
      for (const auto& t : rhs) {
        try {
          judgements.push_back(parse_judgement(t));
        } catch (const LookupError& e) {
          error(e.what());
          return;
        }
      }
      b.preferences[GoodId(lhs[1])] = std::move(judgements);
      return;
    }
    if (key == "reputation") {
      reputation_line(b, lhs, rhs);
      return;
    }
    if (key == "history") {
      history_line(b, lhs, rhs);
      return;
    }
    single_value(lhs, rhs);
    auto& p = b.policy;
    double* target = nullptr;
    if (key == "reputed_threshold") target = &p.reputed_threshold;
    if (key == "disreputed_threshold") target = &p.disreputed_threshold;
    if (key == "penalty") target = &p.penalty;
    if (key == "value_scale") target = &p.value_scale;
    if (key == "alpha_rate") target = &p.alpha_rate;
    if (key == "beta_rate") target = &p.beta_rate;
    if (key == "rho") target = &p.exploration.initial;
    if (key == "rho_min") target = &p.exploration.minimum;
    if (key == "rho_decay") target = &p.exploration.decay;
    if (!target) {
      error("unknown buyer setting '" + key + "'");
      return;
    }
    real(rhs.front(), *target);
  }

  // reputation <seller> = <or> [transactions <n>] [category <name>]
  void reputation_line(BuyerSpec& b, const std::vector<std::string>& lhs, const std::vector<std::string>& rhs) {
    expect_arity(lhs, 2);
    if (lhs.size() != 2) return;
    ReputationSeed seed;
    seed.seller = SellerId(lhs[1]);
    if (!real(rhs[0], seed.overall)) return;
    for (std::size_t i = 1; i < rhs.size(); i += 2) {
      if (i + 1 >= rhs.size()) {
        error("'" + rhs[i] + "' needs a value");
        return;
      }
      if (rhs[i] == "transactions") {
        if (!count(rhs[i + 1], seed.transactions)) return;
      } else if (rhs[i] == "category") {
        const auto& c = rhs[i + 1];
        if (c == "reputed") {
          seed.category = SellerCategory::Reputed;
        } else if (c == "non-reputed") {
          seed.category = SellerCategory::NonReputed;
        } else if (c == "dis-reputed") {
          seed.category = SellerCategory::DisReputed;
        } else if (c == "new") {
          seed.category = SellerCategory::New;
        } else {
          error("unknown category '" + c + "'");
          return;
        }
      } else {
        error("unknown reputation option '" + rhs[i] + "'");
        return;
      }
    }
    b.reputations.push_back(std::move(seed));
  }

  // history <good> delta = <d>
  // history <good> = <a1 a2 a3 a4> | <a1 a2 a3 a4> | ...   (one past weight vector)
  void history_line(BuyerSpec& b, const std::vector<std::string>& lhs, const std::vector<std::string>& rhs) {
    if (lhs.size() == 3 && lhs[2] == "delta") {
      if (rhs.size() != 1) {
        error("'history <good> delta' takes a single value");
        return;
      }
      real(rhs.front(), b.histories[GoodId(lhs[1])].delta);
      return;
    }
    expect_arity(lhs, 2);
    if (lhs.size() != 2) return;
    std::vector<Tfn> entry;
    std::vector<std::string> group;
    auto flush = [&]() {
      std::optional<Tfn> q;
      if (!quadruple(group, 0, q)) return false;
      entry.push_back(*q);
      group.clear();
      return true;
    };
    for (const auto& t : rhs) {
      if (t == "|") {
        if (!flush()) return;
      } else {
        group.push_back(t);
      }
    }
    if (!flush()) return;
    b.histories[GoodId(lhs[1])].entries.push_back(std::move(entry));
  }

  // offer <good> = <term>... price <x>
  // profile = honest | shift <l>... | value <threshold> below <l>... above <l>...
  void seller_line(const std::vector<std::string>& lhs, const std::vector<std::string>& rhs) {
    auto& s = cfg_.sellers.back();
    const auto& key = lhs.front();
    if (key == "offer") {
      expect_arity(lhs, 2);
      if (lhs.size() != 2) return;
      Offer offer;
      std::size_t i = 0;
      for (; i < rhs.size() && rhs[i] != "price"; ++i) {
        try {
          offer.ratings.push_back(parse_performance_term(rhs[i]));
        } catch (const LookupError& e) {
          error(e.what());
          return;
        }
      }
      if (i + 2 != rhs.size()) {
        error("offer needs 'price <value>' after its ratings");
        return;
      }
      if (!real(rhs[i + 1], offer.price)) return;
      s.catalog[GoodId(lhs[1])] = std::move(offer);
      return;
    }
    if (key != "profile") {
      error("unknown seller setting '" + key + "'");
      return;
    }
    expect_arity(lhs, 1);
    const auto& mode = rhs.front();
    if (mode == "honest") {
      if (rhs.size() != 1) error("'honest' takes no arguments");
      s.profile = HonestyProfile::honest();
    } else if (mode == "shift") {
      std::vector<int> l;
      if (levels(rhs, 1, l)) s.profile = HonestyProfile::shifted(std::move(l));
    } else if (mode == "value") {
      auto below = std::find(rhs.begin(), rhs.end(), "below");
      auto above = std::find(rhs.begin(), rhs.end(), "above");
      if (rhs.size() < 6 || below != rhs.begin() + 2 || above == rhs.end() || above < below) {
        error("expected 'value <threshold> below <levels> above <levels>'");
        return;
      }
      double threshold = 0.0;
      if (!real(rhs[1], threshold)) return;
      std::vector<int> lo;
      std::vector<int> hi;
      std::vector<std::string> lo_tokens(below + 1, above);
      std::vector<std::string> hi_tokens(above + 1, rhs.end());
      if (!levels(lo_tokens, 0, lo) || !levels(hi_tokens, 0, hi)) return;
      s.profile = HonestyProfile::value_conditional(threshold, std::move(lo), std::move(hi));
    } else {
      error("unknown profile '" + mode + "'");
    }
  }

  // demand <step> <buyer> <good> [: <seller>...]
  // repeat <buyer> <good> every <n> [from <a>] [to <b>] [: <seller>...]
  void schedule_line(const std::vector<std::string>& all) {
    std::vector<std::string> head = all;
    std::optional<std::vector<SellerId>> responders;
    if (auto colon = std::find(all.begin(), all.end(), ":"); colon != all.end()) {
      head.assign(all.begin(), colon);
      responders.emplace();
      for (auto it = colon + 1; it != all.end(); ++it) responders->emplace_back(*it);
      if (responders->empty()) {
        error("':' must be followed by at least one seller");
        return;
      }
    }
    auto add = [&](std::size_t step, const std::string& buyer, const std::string& good) {
      cfg_.locations.try_emplace("demand " + std::to_string(cfg_.schedule.size() + 1), where());
      cfg_.schedule.push_back({step, BuyerId(buyer), GoodId(good), responders});
    };
    if (head.front() == "demand") {
      if (head.size() != 4) {
        error("expected 'demand <step> <buyer> <good>'");
        return;
      }
      std::size_t step = 0;
      if (count(head[1], step, "a step index")) add(step, head[2], head[3]);
      return;
    }
    if (head.front() == "repeat") {
      if (head.size() < 5 || head[3] != "every") {
        error("expected 'repeat <buyer> <good> every <n> [from <a>] [to <b>]'");
        return;
      }
      std::size_t every = 0;
      std::size_t from = 0;
      std::optional<std::size_t> to;
      if (!count(head[4], every, "a positive interval")) return;
      if (every == 0) {
        error("repeat interval must be positive");
        return;
      }
      for (std::size_t i = 5; i < head.size(); i += 2) {
        if (i + 1 >= head.size()) {
          error("'" + head[i] + "' needs a value");
          return;
        }
        std::size_t v = 0;
        if (!count(head[i + 1], v, "a step index")) return;
        if (head[i] == "from") {
          from = v;
        } else if (head[i] == "to") {
          to = v;
        } else {
          error("unknown repeat option '" + head[i] + "'");
          return;
        }
      }
      pending_repeats_.push_back({from, to, every, head[1], head[2], responders, where()});
      return;
    }
    error("unknown schedule directive '" + head.front() + "'");
  }

  struct Repeat {
    std::size_t from;
    std::optional<std::size_t> to;
    std::size_t every;
    std::string buyer;
    std::string good;
    std::optional<std::vector<SellerId>> responders;
    std::string location;
  };

  // Open-ended repeats run to the last step, known only once the whole file is read.
  void expand_repeat(const Repeat& r) {
    const std::size_t last = r.to.value_or(cfg_.steps == 0 ? 0 : cfg_.steps - 1);
    for (std::size_t step = r.from; step <= last; step += r.every) {
      cfg_.locations.try_emplace("demand " + std::to_string(cfg_.schedule.size() + 1), r.location);
      cfg_.schedule.push_back({step, BuyerId(r.buyer), GoodId(r.good), r.responders});
    }
  }

  void attack_line(const std::vector<std::string>& lhs, const std::vector<std::string>& rhs) {
    auto& a = cfg_.attacks.back();
    const auto& key = lhs.front();
    expect_arity(lhs, 1);
    if (key == "raters") {
      a.raters.clear();
      for (const auto& r : rhs) a.raters.emplace_back(r);
      return;
    }
    if (key == "below" || key == "above") {
      levels(rhs, 0, key == "below" ? a.below_shift : a.above_shift);
      return;
    }
    if (rhs.size() != 1) {
      error("'" + key + "' takes a single value");
      return;
    }
    const auto& value = rhs.front();
    if (key == "kind") {
      if (value == "BS") {
        a.kind = AttackKind::BallotStuffing;
      } else if (value == "BM") {
        a.kind = AttackKind::BadMouthing;
      } else if (value == "VIM") {
        a.kind = AttackKind::ValueImbalance;
      } else if (value == "REN") {
        a.kind = AttackKind::ReEntry;
      } else if (value == "SE") {
        a.kind = AttackKind::SuddenExit;
      } else if (value == "REC_RET" || value == "REC" || value == "RET") {
        a.kind = AttackKind::ReciprocityRetaliation;
        if (value == "RET") a.reciprocity = false;
      } else {
        error("unknown attack kind '" + value + "'");
      }
    } else if (key == "target") {
      a.target = SellerId(value);
    } else if (key == "start") {
      count(value, a.start, "a step index");
    } else if (key == "end") {
      std::size_t e = 0;
      if (count(value, e, "a step index")) a.end = e;
    } else if (key == "after") {
      count(value, a.after_transactions);
    } else if (key == "level") {
      real(value, a.level);
    } else if (key == "threshold") {
      real(value, a.value_threshold);
    } else if (key == "new_id") {
      a.new_identity = SellerId(value);
    } else if (key == "partner") {
      a.partner = BuyerId(value);
    } else if (key == "mode") {
      if (value == "reciprocity") {
        a.reciprocity = true;
      } else if (value == "retaliation") {
        a.reciprocity = false;
      } else {
        error("mode must be reciprocity or retaliation");
      }
    } else if (key == "surprise") {
      real(value, a.surprise);
    } else {
      error("unknown attack setting '" + key + "'");
    }
  }

  std::string_view text_;
  std::string source_;
  std::size_t line_ = 0;
  Section section_ = Section::None;
  ScenarioConfig cfg_;
  std::vector<std::string> errors_;
  std::array<std::optional<Tfn>, kScaleSize> importance_terms_;
  std::array<std::optional<Tfn>, kScaleSize> performance_terms_;
  std::string scale_line_;
  std::vector<Repeat> pending_repeats_;
};

}  // namespace

ScenarioConfig parse_config(std::string_view text, const std::string& source) {
  return Parser(text, source).parse();
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path.string() + ": cannot open file"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace repute
