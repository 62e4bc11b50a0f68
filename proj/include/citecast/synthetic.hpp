#pragma once

#include <cstdint>

#include "citecast/corpus.hpp"

namespace citecast {

// Knobs of the synthetic publication model. Each author has a latent fitness
// and productivity; papers inherit their authors' fitness as quality, and
// citations attach preferentially to quality x (citations + 1). Past citation
// counts therefore carry information about future citation flux.
struct SyntheticModel {
  Date start = make_date(1992, 1, 1);
  Date end = make_date(2018, 7, 1);  // exclusive
  Date window_start = make_date(1996, 1, 1);
  Date window_end = make_date(2003, 1, 1);
  double in_window_fraction = 0.85;  // authors whose first paper falls in the window
  double fitness_sigma = 0.6;        // log-normal spread of author fitness
  double productivity_sigma = 0.35;  // log-normal spread of publication rate
  double quality_noise = 0.3;        // per-paper log-normal noise on quality
  double mean_coauthors = 1.2;       // Poisson mean, excluding the lead author
  double mean_references = 14.0;     // Poisson mean of outgoing citations
  double citation_half_life = 5.0;   // years; older papers are cited less
  double journal_fraction = 0.7;     // papers carrying a journal reference
  double collaboration_fraction = 0.005;  // papers with > 30 authors
  double name_variant_fraction = 0.3;     // "A. Name" instead of "Anna Name"
};

// Deterministic given the seed. Papers are ordered and numbered by date.
Corpus generate_synthetic_corpus(std::size_t n_authors, std::size_t n_papers, std::uint64_t seed,
                                 const SyntheticModel& model = {});

}  // namespace citecast
