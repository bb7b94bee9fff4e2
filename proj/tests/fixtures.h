#ifndef EIGENTHEMES_TESTS_FIXTURES_H_
#define EIGENTHEMES_TESTS_FIXTURES_H_

#include <string>
#include <vector>

#include "eigenthemes/dataset.h"
#include "eigenthemes/embeddings.h"
#include "eigenthemes/weighting.h"

namespace eigenthemes::fixtures {

// Two-dimensional word space with hand-checkable cosines.
//   alpha = (1, 0), beta = (0, 1)
//   c1 "alpha" -> (1, 0), c2 "beta" -> (0, 1), c3 "alpha beta" -> (.5, .5)
// Context "alpha alpha beta" averages to (2/3, 1/3), giving cosines
//   c3: 3/sqrt(10), c1: 2/sqrt(5), c2: 1/sqrt(5).
struct TextWorld {
  EmbeddingStore words{2};
  EmbeddingStore descriptions{2};
  TextResources text;
  DocumentTask doc;

  TextWorld() {
    words.Add("alpha", std::vector<double>{1.0, 0.0});
    words.Add("beta", std::vector<double>{0.0, 1.0});
    descriptions = BuildDescriptionEmbeddings(
        {{"c1", "alpha"}, {"c2", "beta"}, {"c3", "Alpha, beta."}}, words);
    text.words = &words;
    text.descriptions = &descriptions;
    text.window = 2;

    doc.doc_id = "doc";
    doc.tokens = {"the",   "Alpha", "alpha", "X",    "beta",
                  "filler", "of",   "zeta",  "zeta", "zeta"};
    MentionTask m;
    m.surface = "X";
    m.gold_qid = "c3";
    m.span = TokenSpan{3, 4};
    m.candidates.mention_surface = "X";
    m.candidates.candidates = {"c1", "c2", "c3"};
    doc.mentions.push_back(m);
  }
};

}  // namespace eigenthemes::fixtures

#endif  // EIGENTHEMES_TESTS_FIXTURES_H_
