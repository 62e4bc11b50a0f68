#include "citecast/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "citecast/errors.hpp"

namespace citecast {

namespace {

constexpr std::string_view kFirstNames[] = {"Anna", "Bruno", "Chen",  "Dmitri", "Elena", "Farid", "Greta",
                                            "Hiro", "Ines",  "Jonas", "Kavya",  "Luca",  "Mei",   "Nils",
                                            "Olga", "Pavel", "Qing",  "Rosa",   "Sven",  "Tariq"};
constexpr std::string_view kSyllables[] = {"ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo",
                                           "ze", "ba", "de", "fi", "go", "hu", "ja", "pe"};

struct Journal {
  const char* abbreviation;
  double jif;
};
// Ascending impact factor; quality tiers index into this list.
constexpr Journal kJournals[] = {
    {"Class. Quantum Grav.", 3.119}, {"Nucl. Phys. B", 3.285},  {"Phys. Rev. B", 3.813},
    {"Phys. Lett. B", 4.254},        {"Phys. Rev. D", 4.394},   {"Mon. Not. R. Astron. Soc.", 4.961},
    {"Eur. Phys. J. C", 5.172},      {"Astrophys. J.", 5.551},  {"Phys. Rev. Lett.", 8.839},
    {"Nature", 41.577}};

struct CategoryFamily {
  const char* top;
  std::vector<const char*> subcategories;
};

const std::vector<CategoryFamily>& categories() {
  static const std::vector<CategoryFamily> families = {
      {"hep-th", {}},
      {"hep-ph", {}},
      {"astro-ph", {"astro-ph.CO", "astro-ph.HE", "astro-ph.GA"}},
      {"gr-qc", {}},
      {"cond-mat", {"cond-mat.str-el", "cond-mat.stat-mech"}},
      {"quant-ph", {}}};
  return families;
}

std::string last_name(std::size_t index, std::size_t syllables) {
  std::string out;
  for (std::size_t k = 0; k < syllables; ++k) {
    out.insert(0, kSyllables[index % 16]);
    index /= 16;
  }
  out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

std::size_t poisson(std::mt19937_64& rng, double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::size_t>(mean)(rng);
}

// Fenwick tree over nonnegative weights with prefix sampling.
class WeightTree {
 public:
  explicit WeightTree(std::size_t n) : tree_(n + 1, 0.0) {}

  void add(std::size_t i, double delta) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }
  double prefix(std::size_t count) const {
    double s = 0.0;
    for (std::size_t i = count; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }
  // Smallest index whose inclusive prefix sum exceeds `target`.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<double> tree_;
};

struct Author {
  std::string first;
  std::string last;
  double fitness;
  double productivity;
  Date start;
  std::size_t home;  // index into categories()
};

struct Draft {
  std::size_t lead;
  Date date;
  std::vector<std::size_t> coauthors;
  bool collaboration = false;
  std::size_t order;  // creation order, breaks date ties
};

}  // namespace

Corpus generate_synthetic_corpus(std::size_t n_authors, std::size_t n_papers, std::uint64_t seed,
                                 const SyntheticModel& model) {
  if (!(model.start < model.window_start && model.window_start < model.window_end && model.window_end < model.end)) {
    throw ArgumentError("synthetic model dates must satisfy start < window_start < window_end < end");
  }
  if (n_authors == 0 && n_papers > 0) throw ArgumentError("synthetic papers need at least one author");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto uniform_date = [&](Date lo, Date hi) {
    auto span = (hi - lo).count();
    return lo + std::chrono::days{static_cast<long>(unit(rng) * static_cast<double>(span))};
  };

  std::size_t syllables = 3;
  while (std::pow(16.0, static_cast<double>(syllables)) < static_cast<double>(n_authors)) ++syllables;

  std::vector<Author> authors;
  authors.reserve(n_authors);
  const Date late_end = std::min(model.end, add_years(model.window_end, 3));
  for (std::size_t i = 0; i < n_authors; ++i) {
    Author a;
    a.first = kFirstNames[i % std::size(kFirstNames)];
    a.last = last_name(i, syllables);
    a.fitness = std::exp(model.fitness_sigma * normal(rng));
    a.productivity = std::exp(model.productivity_sigma * normal(rng));
    if (unit(rng) < model.in_window_fraction) {
      a.start = uniform_date(model.window_start, model.window_end);
    } else if (unit(rng) < 0.5) {
      a.start = uniform_date(model.start, model.window_start);
    } else {
      a.start = uniform_date(model.window_end, late_end);
    }
    a.home = static_cast<std::size_t>(unit(rng) * static_cast<double>(categories().size())) % categories().size();
    authors.push_back(std::move(a));
  }

  // Papers: every author's first paper at their start date, the rest spread
  // over active careers in proportion to productivity.
  std::vector<Draft> drafts;
  drafts.reserve(n_papers);
  for (std::size_t i = 0; i < std::min(n_authors, n_papers); ++i) drafts.push_back({i, authors[i].start, {}, false, i});
  if (n_papers > drafts.size() && n_authors > 0) {
    std::vector<double> weights(n_authors);
    for (std::size_t i = 0; i < n_authors; ++i) {
      weights[i] = authors[i].productivity * static_cast<double>((model.end - authors[i].start).count());
    }
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    while (drafts.size() < n_papers) {
      auto lead = pick(rng);
      drafts.push_back({lead, uniform_date(authors[lead].start, model.end), {}, false, drafts.size()});
    }
  }
  for (auto& d : drafts) {
    d.collaboration = unit(rng) < model.collaboration_fraction;
    std::size_t wanted = d.collaboration ? 34 : poisson(rng, model.mean_coauthors);
    std::set<std::size_t> chosen{d.lead};
    for (std::size_t k = 0; k < wanted; ++k) {
      for (int attempt = 0; attempt < 20; ++attempt) {
        auto c = static_cast<std::size_t>(unit(rng) * static_cast<double>(n_authors)) % n_authors;
        if (authors[c].start <= d.date && chosen.insert(c).second) {
          d.coauthors.push_back(c);
          break;
        }
      }
    }
  }
  std::sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    return std::tie(a.date, a.order) < std::tie(b.date, b.order);
  });

  const std::size_t n = drafts.size();
  std::vector<PaperRecord> papers(n);
  std::vector<double> quality(n);
  const std::size_t id_width = std::max<std::size_t>(6, std::to_string(n).size());
  for (std::size_t p = 0; p < n; ++p) {
    const auto& d = drafts[p];
    auto& rec = papers[p];
    char id[32];
    std::snprintf(id, sizeof id, "synth-%0*zu", static_cast<int>(id_width), p);
    rec.id = id;
    rec.date = d.date;

    double fitness = authors[d.lead].fitness;
    std::vector<std::size_t> members{d.lead};
    members.insert(members.end(), d.coauthors.begin(), d.coauthors.end());
    for (auto c : d.coauthors) fitness += authors[c].fitness;
    fitness /= static_cast<double>(members.size());
    quality[p] = fitness * std::exp(model.quality_noise * normal(rng));

    for (auto m : members) {
      const auto& a = authors[m];
      bool variant = unit(rng) < model.name_variant_fraction;
      rec.author_names.push_back((variant ? a.first.substr(0, 1) + "." : a.first) + " " + a.last);
    }
    if (d.collaboration) rec.author_names.push_back("Synthetic Collaboration");

    const auto& family = categories()[authors[d.lead].home];
    if (!family.subcategories.empty() && unit(rng) < 0.7) {
      rec.categories.push_back(family.subcategories[static_cast<std::size_t>(unit(rng) * 1e6) % family.subcategories.size()]);
    } else {
      rec.categories.push_back(family.top);
    }
    if (unit(rng) < 0.2) {
      const auto& other = categories()[static_cast<std::size_t>(unit(rng) * 1e6) % categories().size()];
      if (other.top != family.top) rec.categories.push_back(other.top);
    }

    if (unit(rng) < model.journal_fraction) {
      constexpr auto journals = static_cast<int>(std::size(kJournals));
      int tier = static_cast<int>(std::floor(std::log(quality[p]) / 0.6 + 4.0 + 1.5 * normal(rng)));
      tier = std::clamp(tier, 0, journals - 1);
      int year = static_cast<int>(std::chrono::year_month_day{d.date}.year());
      int volume = 40 + (year - 1990) * 3 + static_cast<int>(unit(rng) * 3);
      int page = 1 + static_cast<int>(unit(rng) * 9000);
      char buf[128];
      if (unit(rng) < 0.3) {
        std::snprintf(buf, sizeof buf, "%s vol. %d (%d) %d", kJournals[tier].abbreviation, volume, year, page);
      } else {
        std::snprintf(buf, sizeof buf, "%s %d (%d) %d", kJournals[tier].abbreviation, volume, year, page);
      }
      rec.journal_ref = buf;
    }
    rec.length = 4 + static_cast<int>(poisson(rng, 8.0 + 2.0 * std::log1p(quality[p])));
  }

  // Citations: each paper cites strictly earlier papers, chosen with weight
  // quality x (citations + 1).
  std::vector<std::pair<std::string, std::string>> edges;
  WeightTree tree(n);
  std::exponential_distribution<double> lookback(std::log(2.0) / model.citation_half_life);
  std::size_t visible = 0;
  for (std::size_t p = 0; p < n; ++p) {
    while (visible < p && papers[visible].date < papers[p].date) {
      tree.add(visible, quality[visible]);
      ++visible;
    }
    if (visible == 0) continue;
    std::size_t refs = std::min(poisson(rng, model.mean_references), visible);
    std::set<std::size_t> cited;
    const double total = tree.prefix(visible);
    for (std::size_t attempt = 0; cited.size() < refs && attempt < 4 * refs + 8; ++attempt) {
      // Look back over an exponentially distributed span, at least one year.
      double span = 1.0 + lookback(rng);
      auto from = papers[p].date - std::chrono::days{static_cast<long>(span * 365.25)};
      auto lo = static_cast<std::size_t>(
          std::lower_bound(papers.begin(), papers.begin() + static_cast<std::ptrdiff_t>(visible), from,
                           [](const PaperRecord& r, Date d) { return r.date < d; }) -
          papers.begin());
      if (lo >= visible) lo = 0;
      double base = tree.prefix(lo);
      auto target = std::min(tree.find(base + unit(rng) * (total - base)), visible - 1);
      cited.insert(std::max(target, lo));
    }
    for (auto c : cited) {
      edges.emplace_back(papers[p].id, papers[c].id);
      tree.add(c, quality[c]);
    }
  }

  JifTable jif;
  for (const auto& j : kJournals) jif[j.abbreviation] = j.jif;
  return Corpus::build(std::move(papers), edges, std::move(jif));
}

}  // namespace citecast
