#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "convdist/dialog.hpp"
#include "convdist/measure.hpp"

namespace convdist {

/// sign(d(a, c1) - d(a, c2)): -1 when c1 is closer, +1 when c2 is closer, 0 on a tie.
int verdict(const Measure& m, std::size_t anchor, std::size_t cand1, std::size_t cand2);

struct Triplet {
  std::uint32_t anchor;
  std::uint32_t cand1;
  std::uint32_t cand2;
  int verdict1;  // from the first measure
  int verdict2;  // from the second measure
};

struct TripletSample {
  std::vector<Triplet> triplets;  // disagreements, in draw order
  std::size_t drawn = 0;          // triplets examined
  std::size_t agreements = 0;
  std::size_t disagreements = 0;
  std::size_t ties = 0;  // at least one measure tied; neither agreement nor disagreement
  bool complete = true;  // false when the attempt budget ran out before n disagreements
  std::string warning;

  /// agreements / (agreements + disagreements); empty when every draw tied.
  std::optional<double> agreement_ratio() const;
};

/// Draws uniform (anchor, cand1, cand2) triplets of distinct conversations and
/// keeps those on which the two measures reach contrasting verdicts. Draws are
/// planned in fixed-size batches on one thread, so the result depends only on
/// the inputs and the seed, never on `jobs`. max_attempts = 0 selects
/// max(10000, 200 * n).
TripletSample sample_disagreement_triplets(const Measure& m1, const Measure& m2, std::size_t n, std::uint64_t seed,
                                           std::size_t max_attempts = 0, int jobs = 1);

std::string triplet_id(std::size_t index);

/// One JSON record per triplet with ids and full texts. The annotator view
/// omits measure verdicts.
void write_triplets(std::ostream& out, const Corpus& corpus, const TripletSample& sample, const std::string& name1,
                    const std::string& name2, bool annotator_view);

struct TripletRef {
  std::string triplet_id;
  std::string anchor;
  std::string cand1;
  std::string cand2;
};

std::vector<TripletRef> read_triplets(std::istream& in);

enum class Choice { First, Second, Undecided };

struct Label {
  std::string triplet_id;
  Choice chosen = Choice::Undecided;
  double agreement = 0.0;  // fraction of annotators sharing the chosen answer
};

/// Records {triplet_id, chosen: 1 | 2 | "undecided", agreement}. Throws ParseError.
std::vector<Label> read_labels(std::istream& in);
void write_labels(std::ostream& out, std::span<const Label> labels);

struct AgreementResult {
  std::size_t labels = 0;
  std::size_t retained = 0;  // decided and at or above the agreement threshold
  std::size_t matches = 0;
  double ratio = 0.0;
};

/// Fraction of retained labels whose chosen candidate is the one the measure
/// finds closer to the anchor (a measure tie never matches). Throws DataError
/// for labels naming unknown triplets or conversations, or when nothing is
/// retained.
AgreementResult agreement_ratio(std::span<const TripletRef> triplets, std::span<const Label> labels, const Measure& m,
                                double min_agreement = 0.8);

}  // namespace convdist
