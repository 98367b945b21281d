// Copyright 2026 The nlwm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nlwm/toy_model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "nlwm/random.h"
#include "nlwm/status.h"
#include "nlwm/stopwords.h"
#include "nlwm/text.h"

namespace nlwm {
namespace {

using WC = WordClass;

struct ClassList {
  WordClass word_class;
  std::vector<std::string_view> words;
};

const std::vector<ClassList>& VocabByClass() {
  static const auto* const kLists = new std::vector<ClassList>{
      {WC::kDet,
       {"the", "a", "an", "this", "that", "these", "those", "every", "each",
        "some", "any", "another", "either", "neither", "several", "many"}},
      {WC::kCc, {"and", "but", "or", "yet", "nor", "so", "plus", "then"}},
      {WC::kPrep,
       {"in",      "on",       "at",      "by",       "for",     "with",
        "from",    "to",       "of",      "about",    "into",    "onto",
        "over",    "under",    "after",   "before",   "during",  "without",
        "within",  "through",  "across",  "behind",   "beyond",  "beside",
        "between", "among",    "against", "along",    "around",  "toward",
        "upon",    "near",     "past",    "inside",   "outside", "throughout",
        "despite", "beneath",  "above",   "below"}},
      {WC::kAux,
       {"is", "was", "were", "are", "be", "been", "being", "am", "has", "have",
        "had", "having", "do", "does", "did", "will", "would", "can", "could",
        "shall", "should", "may", "might", "must"}},
      {WC::kMark,
       {"because", "although", "though", "while", "if", "unless", "whereas",
        "whether", "since", "until", "once", "when", "whenever", "wherever",
        "as", "lest"}},
      {WC::kPrt, {"up", "out", "off", "down", "away", "back", "aside", "forth"}},
      {WC::kPron,
       {"i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us",
        "them", "my", "your", "his", "its", "our", "their", "myself",
        "himself", "herself", "itself", "themselves", "ourselves"}},
      {WC::kSubword,
       {"##s", "##ed", "##ing", "##ly", "##er", "##est", "##ness", "##ment",
        "##ful", "##less", "##able", "##ous", "##ive", "##al", "##ity",
        "##ion", "##ize", "##ish", "##en", "##y", "##ic", "##ist", "##ism",
        "##ward"}},
      {WC::kPunct,
       {",", ".", ";", "!", "?", ":", "-", "'", "\"", "(", ")", "...", "--",
        "&", "/", "*"}},
      {WC::kAdv,
       {"very",      "quite",      "rather",    "fairly",    "pretty",
        "really",    "truly",      "simply",    "only",      "just",
        "even",      "still",      "always",    "often",     "rarely",
        "seldom",    "sometimes",  "usually",   "quickly",   "slowly",
        "quietly",   "softly",     "loudly",    "gently",    "suddenly",
        "finally",   "nearly",     "almost",    "hardly",    "barely",
        "clearly",   "certainly",  "surely",    "perhaps",   "maybe",
        "indeed",    "again",      "soon",      "later",     "already",
        "here",      "everywhere", "somewhere", "together",  "alone",
        "instead",   "otherwise",  "therefore", "however",   "thus",
        "meanwhile", "afterwards", "badly",     "well",      "far",
        "deeply",    "highly",     "mostly",    "partly",    "largely"}},
      {WC::kAdj,
       {"good",      "bad",       "great",     "small",     "large",
        "big",       "little",    "old",       "young",     "new",
        "long",      "short",     "high",      "low",       "dark",
        "bright",    "cold",      "warm",      "hot",       "cool",
        "strange",   "quiet",     "loud",      "soft",      "hard",
        "easy",      "difficult", "simple",    "clear",     "deep",
        "wide",      "narrow",    "heavy",     "dim",       "strong",
        "weak",      "rich",      "poor",      "happy",     "sad",
        "angry",     "calm",      "brave",     "cruel",     "kind",
        "gentle",    "wild",      "pale",      "grim",      "grave",
        "silent",    "empty",     "full",      "fresh",     "dry",
        "wet",       "rough",     "smooth",    "sharp",     "dull",
        "early",     "late",      "ancient",   "modern",    "famous",
        "common",    "rare",      "local",     "public",    "private",
        "true",      "false",     "real",      "main",      "final",
        "whole",     "entire",    "certain",   "similar",   "different",
        "beautiful", "terrible",  "wonderful", "awful",     "curious",
        "serious",   "careful",   "useful",    "hopeful",   "lonely",
        "bitter",    "sweet",     "tired",     "busy",      "ready",
        "proud",     "eager",     "brief",     "vast",      "tiny"}},
      {WC::kVerb,
       {"walked", "waited", "looked", "seemed", "turned", "opened", "closed",
        "watched", "called", "asked", "stood", "sat", "ran", "came", "went",
        "saw", "took", "gave", "made", "found", "said", "told", "knew",
        "thought", "felt", "heard", "kept", "left", "held", "brought",
        "wrote", "read", "spoke", "began", "became", "grew", "fell", "rose",
        "lay", "slept", "walks", "waits", "looks", "seems", "turns", "opens",
        "closes", "watches", "calls", "asks", "stands", "sits", "runs",
        "comes", "goes", "sees", "takes", "gives", "makes", "finds", "says",
        "tells", "knows", "thinks", "feels", "hears", "keeps", "leaves",
        "holds", "brings", "writes", "reads", "speaks", "begins", "becomes",
        "grows", "falls", "rises", "lies", "sleeps"}},
      {WC::kNoun,
       {"man",      "woman",    "child",   "house",   "door",     "window",
        "road",     "gate",     "light",   "night",   "day",      "morning",
        "evening",  "room",     "wall",    "floor",   "table",    "chair",
        "bed",      "fire",     "water",   "river",   "sea",      "hill",
        "mountain", "forest",   "tree",    "garden",  "field",    "stone",
        "city",     "town",     "village", "country", "world",    "land",
        "sky",      "wind",     "rain",    "snow",    "book",     "letter",
        "story",    "film",     "movie",   "scene",   "actor",    "plot",
        "character", "music",   "voice",   "face",    "hand",     "eye",
        "head",     "heart",    "mind",    "body",    "friend",   "family",
        "king",     "queen",    "soldier", "doctor",  "teacher",  "student",
        "writer",   "reader",   "audience", "crowd",  "time",     "year",
        "moment",   "hour",     "week",    "month",   "history",  "war",
        "peace",    "power",    "money",   "work",    "life",     "death",
        "love",     "fear",     "hope",    "truth",   "name",     "word",
        "horse",    "dog",      "bird",    "ship",    "train",    "car"}},
  };
  return *kLists;
}

// Fine-grained lexical categories used by the parser and by the infill class
// guesser. Wider than WordClass: it also covers closed-class words that are
// not in the vocabulary.
enum class Lex {
  kDet,
  kPredet,
  kPoss,
  kCc,
  kPrep,
  kTo,
  kAux,
  kMark,
  kPrt,
  kPron,
  kNeg,
  kExpl,
  kWh,
  kNum,
  kAdv,
  kAdj,
  kVerb,
  kNoun,
  kPropn,
};

const std::unordered_map<std::string, Lex>& Lexicon() {
  static const auto* const kLexicon = [] {
    auto* lex = new std::unordered_map<std::string, Lex>;
    auto from = [](WordClass c) {
      switch (c) {
        case WC::kDet: return Lex::kDet;
        case WC::kCc: return Lex::kCc;
        case WC::kPrep: return Lex::kPrep;
        case WC::kAux: return Lex::kAux;
        case WC::kMark: return Lex::kMark;
        case WC::kPrt: return Lex::kPrt;
        case WC::kPron: return Lex::kPron;
        case WC::kAdv: return Lex::kAdv;
        case WC::kAdj: return Lex::kAdj;
        case WC::kVerb: return Lex::kVerb;
        default: return Lex::kNoun;
      }
    };
    for (const ClassList& list : VocabByClass()) {
      if (list.word_class == WC::kSubword || list.word_class == WC::kPunct) {
        continue;
      }
      for (std::string_view w : list.words) {
        lex->emplace(std::string(w), from(list.word_class));
      }
    }
    for (const char* w : {"my", "your", "his", "its", "our", "their", "her",
                          "whose"}) {
      (*lex)[w] = Lex::kPoss;
    }
    for (const char* w : {"all", "both", "half"}) (*lex)[w] = Lex::kPredet;
    for (const char* w : {"not", "never", "n't", "no"}) (*lex)[w] = Lex::kNeg;
    for (const char* w : {"who", "which", "whom", "what", "how", "why",
                          "where"}) {
      (*lex)[w] = Lex::kWh;
    }
    for (const char* w : {"one", "two", "three", "four", "five", "six",
                          "seven", "eight", "nine", "ten", "hundred",
                          "thousand"}) {
      (*lex)[w] = Lex::kNum;
    }
    for (const char* w :
         {"done", "gone", "seen", "known", "taken", "given", "written",
          "spoken", "broken", "chosen", "driven", "eaten", "fallen",
          "forgotten", "hidden", "shown", "built", "sent", "spent", "lost",
          "won", "caught", "bought", "taught", "understand", "get", "got",
          "let", "put", "set", "say", "see", "go", "come", "make", "take",
          "know", "think", "feel", "find", "give", "tell", "seem", "become",
          "leave", "keep", "hold", "bring", "begin", "write", "speak",
          "stand", "sit", "run", "watch", "look", "wait", "turn", "open",
          "close", "ask", "call", "hear", "sleep", "rise", "fall", "grow",
          "lie", "walk", "stay", "stayed", "live", "lived", "tried", "died",
          "cried", "replied", "led", "met", "fought", "struck", "swept",
          "wept", "crept", "drew", "threw", "knelt", "shook", "woke", "wore"}) {
      (*lex)[w] = Lex::kVerb;
    }
    for (const char* w : {"there"}) (*lex)[w] = Lex::kExpl;
    (*lex)["to"] = Lex::kTo;
    for (const char* w : {"more", "most", "less", "least", "too", "now",
                          "also", "not", "ever", "never"}) {
      if (!lex->count(w)) (*lex)[w] = Lex::kAdv;
    }
    return lex;
  }();
  return *kLexicon;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool IsCapitalized(std::string_view w) {
  return !w.empty() && w[0] >= 'A' && w[0] <= 'Z';
}

bool IsDigits(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return (c >= '0' && c <= '9') || c == ',' || c == '.';
  });
}

Lex SuffixGuess(std::string_view lower) {
  if (EndsWith(lower, "ly")) return Lex::kAdv;
  if (EndsWith(lower, "ing") || EndsWith(lower, "ed")) return Lex::kVerb;
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "less",
                             "ish", "ic", "al", "ent", "ant"}) {
    if (EndsWith(lower, s)) return Lex::kAdj;
  }
  return Lex::kNoun;
}

// Lexical category of word `i` of `words`.
Lex Classify(const std::vector<std::string>& words, int i) {
  const std::string& w = words[i];
  if (IsDigits(w)) return Lex::kNum;
  const std::string lower = AsciiLower(w);
  auto it = Lexicon().find(lower);
  const bool known = it != Lexicon().end();
  if (IsCapitalized(w) && w != "I" && !known) {
    if (i > 0) return Lex::kPropn;
    // Sentence-initial: only clearly name-like words, or the start of a run
    // of capitalized words.
    const bool run = words.size() > 1 && IsCapitalized(words[1]) &&
                     words[1] != "I";
    if (run || (SuffixGuess(lower) == Lex::kNoun && !EndsWith(lower, "s"))) {
      return Lex::kPropn;
    }
  }
  if (known) return it->second;
  if (EndsWith(lower, "'s") || EndsWith(lower, "s'")) return Lex::kPoss;
  if (EndsWith(lower, "n't")) return Lex::kAux;
  return SuffixGuess(lower);
}

bool IsBeForm(std::string_view lower) {
  for (std::string_view b : {"is", "was", "were", "are", "be", "been",
                             "being", "am"}) {
    if (lower == b) return true;
  }
  return false;
}

bool IsParticiple(std::string_view lower) {
  static const std::set<std::string_view> kIrregular = {
      "done", "gone", "seen", "known", "taken", "given", "written", "spoken",
      "broken", "chosen", "driven", "eaten", "fallen", "forgotten", "hidden",
      "shown", "built", "sent", "spent", "lost", "won", "caught", "bought",
      "taught", "made", "found", "told", "kept", "left", "held", "brought",
      "heard", "felt", "led", "met", "fought", "struck"};
  return EndsWith(lower, "ed") || EndsWith(lower, "en") ||
         kIrregular.count(lower) > 0;
}

bool IsNominal(Lex c) {
  return c == Lex::kNoun || c == Lex::kPropn || c == Lex::kNum;
}

bool IsVerbal(Lex c) { return c == Lex::kVerb || c == Lex::kAux; }

// Neighbour groups for the infill class guesser.
enum class Group { kEdge, kDetLike, kNominal, kAdj, kAdv, kVerb, kAux, kPrep, kConj };

Group GroupOf(Lex c) {
  switch (c) {
    case Lex::kDet:
    case Lex::kPredet:
    case Lex::kPoss:
      return Group::kDetLike;
    case Lex::kNoun:
    case Lex::kPropn:
    case Lex::kNum:
    case Lex::kPron:
    case Lex::kWh:
      return Group::kNominal;
    case Lex::kAdj:
      return Group::kAdj;
    case Lex::kAdv:
    case Lex::kNeg:
    case Lex::kExpl:
      return Group::kAdv;
    case Lex::kVerb:
      return Group::kVerb;
    case Lex::kAux:
      return Group::kAux;
    case Lex::kPrep:
    case Lex::kTo:
    case Lex::kPrt:
      return Group::kPrep;
    case Lex::kCc:
    case Lex::kMark:
      return Group::kConj;
  }
  return Group::kEdge;
}

// (primary, secondary) class for a masked word between neighbours `l` and
// `r`. A crude bigram grammar; it only has to be right often enough that
// substitutes keep the masked word's role.
std::pair<WordClass, WordClass> GuessClass(Group l, Group r) {
  using G = Group;
  switch (r) {
    case G::kDetLike:
      if (l == G::kAux) return {WC::kVerb, WC::kPrep};
      return {WC::kPrep, WC::kVerb};
    case G::kNominal:
      if (l == G::kDetLike) return {WC::kAdj, WC::kNoun};
      if (l == G::kAdj) return {WC::kAdj, WC::kNoun};
      if (l == G::kNominal) return {WC::kCc, WC::kPrep};
      if (l == G::kAdv) return {WC::kAdj, WC::kDet};
      return {WC::kDet, WC::kAdj};
    case G::kAdj:
      if (l == G::kDetLike) return {WC::kAdv, WC::kAdj};
      if (l == G::kAux || l == G::kVerb) return {WC::kAdv, WC::kDet};
      if (l == G::kNominal) return {WC::kAux, WC::kCc};
      if (l == G::kAdj) return {WC::kCc, WC::kAdv};
      return {WC::kDet, WC::kAdv};
    case G::kVerb:
      if (l == G::kNominal || l == G::kAdv) return {WC::kAux, WC::kAdv};
      if (l == G::kAux) return {WC::kAdv, WC::kVerb};
      if (l == G::kEdge || l == G::kConj) return {WC::kNoun, WC::kAdv};
      return {WC::kAdv, WC::kAux};
    case G::kAdv:
      if (l == G::kVerb || l == G::kAdj || l == G::kAdv || l == G::kNominal) {
        return {WC::kCc, WC::kAdv};
      }
      if (l == G::kAux) return {WC::kAdv, WC::kVerb};
      return {WC::kAdv, WC::kCc};
    case G::kAux:
      if (l == G::kDetLike) return {WC::kNoun, WC::kAdj};
      if (l == G::kNominal) return {WC::kAdv, WC::kNoun};
      return {WC::kNoun, WC::kAdv};
    case G::kPrep:
      if (l == G::kAux) return {WC::kVerb, WC::kAdj};
      if (l == G::kNominal) return {WC::kVerb, WC::kAdv};
      if (l == G::kVerb) return {WC::kAdv, WC::kPrt};
      if (l == G::kDetLike || l == G::kAdj) return {WC::kNoun, WC::kAdj};
      return {WC::kNoun, WC::kVerb};
    case G::kConj:
    case G::kEdge:
      if (l == G::kDetLike || l == G::kAdj) return {WC::kNoun, WC::kAdj};
      if (l == G::kAux) return {WC::kAdj, WC::kVerb};
      if (l == G::kVerb) return {WC::kAdv, WC::kNoun};
      if (l == G::kPrep) return {WC::kNoun, WC::kDet};
      if (l == G::kNominal) return {WC::kVerb, WC::kNoun};
      if (l == G::kAdv) return {WC::kAdj, WC::kVerb};
      return {WC::kNoun, WC::kAdj};
  }
  return {WC::kNoun, WC::kAdj};
}

std::vector<std::string_view> ClassWords(WordClass c) {
  for (const ClassList& list : VocabByClass()) {
    if (list.word_class == c) return list.words;
  }
  return {};
}

// Members of `words` ordered by a keyed hash: a stable pseudo-random
// permutation per (context, position, class).
void AppendPermuted(std::vector<std::string_view> words, std::uint64_t key,
                    std::vector<std::string_view>& out,
                    std::set<std::string_view>& seen) {
  std::sort(words.begin(), words.end(),
            [key](std::string_view a, std::string_view b) {
              const std::uint64_t ha = HashBytes(a, key);
              const std::uint64_t hb = HashBytes(b, key);
              return ha != hb ? ha < hb : a < b;
            });
  for (std::string_view w : words) {
    if (seen.insert(w).second) out.push_back(w);
  }
}

std::vector<std::string> Words(std::string_view text) {
  auto sentence = TokenizeAllowEmpty(text);
  if (!sentence.ok()) return {};
  return sentence->WordSurfaces();
}

}  // namespace

const std::vector<VocabEntry>& ToyVocabulary() {
  static const auto* const kVocab = [] {
    auto* vocab = new std::vector<VocabEntry>;
    for (const ClassList& list : VocabByClass()) {
      for (std::string_view w : list.words) {
        vocab->push_back({w, list.word_class});
      }
    }
    return vocab;
  }();
  return *kVocab;
}

std::vector<std::string> ToyWordVocabulary() {
  std::vector<std::string> out;
  for (const VocabEntry& e : ToyVocabulary()) {
    if (e.word_class != WC::kSubword && e.word_class != WC::kPunct) {
      out.emplace_back(e.token);
    }
  }
  return out;
}

Json ToyModel::Infill(const std::string& masked_text,
                      const std::vector<int>& masks, int k) const {
  auto sentence = TokenizeAllowEmpty(masked_text);
  const std::vector<std::string> words =
      sentence.ok() ? sentence->WordSurfaces() : std::vector<std::string>{};
  const std::set<int> masked(masks.begin(), masks.end());
  const std::uint64_t context = HashBytes(masked_text, 0x746f79);
  // Word i is adjacent to word j when only the mask brackets lie between.
  auto neighbour = [&](int i, int step) {
    const int j = i + step;
    if (j < 0 || j >= static_cast<int>(words.size()) || masked.count(j)) {
      return Group::kEdge;
    }
    const int ti = sentence->words()[i];
    const int tj = sentence->words()[j];
    const int gap = std::abs(tj - ti) - 1;
    const int allowed = (masked.count(i) ? 1 : 0);
    if (gap > allowed) return Group::kEdge;
    return GroupOf(Classify(words, j));
  };
  Json out = Json::array();
  for (int position : masks) {
    Group l = Group::kEdge;
    Group r = Group::kEdge;
    if (position < static_cast<int>(words.size())) {
      l = neighbour(position, -1);
      r = neighbour(position, +1);
    }
    const auto [primary, secondary] = GuessClass(l, r);
    const std::uint64_t key = Mix64(context ^ Mix64(position + 1));
    std::vector<std::string_view> ranked;
    std::set<std::string_view> seen;
    AppendPermuted(ClassWords(primary), key ^ 1, ranked, seen);
    AppendPermuted(ClassWords(secondary), key ^ 2, ranked, seen);
    std::vector<std::string_view> all;
    for (const VocabEntry& e : ToyVocabulary()) all.push_back(e.token);
    AppendPermuted(all, key ^ 3, ranked, seen);
    // Real models leak punctuation and word pieces into the top ranks now
    // and then; do the same so the filters have something to remove.
    if (key % 5 == 0) {
      const auto pieces = ClassWords(WC::kSubword);
      std::string_view piece = pieces[(key >> 8) % pieces.size()];
      ranked.erase(std::find(ranked.begin(), ranked.end(), piece));
      ranked.insert(ranked.begin() + 1, piece);
    }
    if (key % 7 == 0) {
      const auto marks = ClassWords(WC::kPunct);
      std::string_view mark = marks[(key >> 16) % marks.size()];
      ranked.erase(std::find(ranked.begin(), ranked.end(), mark));
      ranked.insert(ranked.begin(), mark);
    }
    const int n = std::min<int>(k, static_cast<int>(ranked.size()));
    double norm = 0;
    for (int r = 0; r < n; ++r) norm += 1.0 / (r + 1);
    Json candidates = Json::array();
    for (int r = 0; r < n; ++r) {
      candidates.push_back({{"token", std::string(ranked[r])},
                            {"prob", (1.0 / (r + 1)) / norm},
                            {"subword", ranked[r].substr(0, 2) == "##"}});
    }
    out.push_back({{"position", position}, {"candidates", candidates}});
  }
  return Json{{"masks", out}};
}

Json ToyModel::Parse(const std::vector<std::string>& words) const {
  const int n = static_cast<int>(words.size());
  std::vector<Lex> lex(n);
  std::vector<std::string> lower(n);
  for (int i = 0; i < n; ++i) {
    lex[i] = Classify(words, i);
    lower[i] = AsciiLower(words[i]);
  }
  auto next_non_adv = [&](int i) {
    int j = i + 1;
    while (j < n && (lex[j] == Lex::kAdv || lex[j] == Lex::kNeg)) ++j;
    return j;
  };
  int root = -1;
  for (Lex want : {Lex::kVerb, Lex::kAux, Lex::kNoun, Lex::kPropn}) {
    for (int i = 0; i < n && root < 0; ++i) {
      if (lex[i] == want) root = i;
    }
  }
  if (root < 0) root = 0;

  std::vector<std::string> label(n);
  std::vector<int> head(n, root);
  bool seen_verb = false;
  for (int i = 0; i < n; ++i) {
    const Lex prev = i > 0 ? lex[i - 1] : Lex::kPrep;
    const Lex next = i + 1 < n ? lex[i + 1] : Lex::kPrep;
    const bool has_next = i + 1 < n;
    std::string& l = label[i];
    if (i == root) {
      l = "ROOT";
      seen_verb = true;
      continue;
    }
    switch (lex[i]) {
      case Lex::kExpl:
        l = (has_next && next == Lex::kAux) ? "expl" : "advmod";
        break;
      case Lex::kCc:
        l = "cc";
        break;
      case Lex::kMark:
        l = "mark";
        break;
      case Lex::kNeg:
        l = "neg";
        break;
      case Lex::kWh:
        l = "advmod";
        break;
      case Lex::kAux: {
        const int j = next_non_adv(i);
        l = (IsBeForm(lower[i]) && j < n && lex[j] == Lex::kVerb &&
             IsParticiple(lower[j]))
                ? "auxpass"
                : "aux";
        break;
      }
      case Lex::kTo:
        l = (has_next && next == Lex::kVerb) ? "aux" : "prep";
        break;
      case Lex::kPrep: {
        bool passive = false;
        if (lower[i] == "by" && i > 0 && lex[i - 1] == Lex::kVerb &&
            IsParticiple(lower[i - 1])) {
          for (int j = std::max(0, i - 4); j < i - 1; ++j) {
            passive |= lex[j] == Lex::kAux && IsBeForm(lower[j]);
          }
        }
        l = passive ? "agent" : "prep";
        break;
      }
      case Lex::kPrt:
        l = (i > 0 && prev == Lex::kVerb) ? "prt" : "advmod";
        break;
      case Lex::kPredet:
        l = (has_next && (next == Lex::kDet || next == Lex::kPoss)) ? "predet"
                                                                    : "det";
        break;
      case Lex::kDet:
        l = "det";
        break;
      case Lex::kPoss:
        l = "poss";
        break;
      case Lex::kNum:
        l = (has_next && IsNominal(next)) ? "nummod" : "dobj";
        break;
      case Lex::kPron:
        if (has_next && IsVerbal(next)) {
          l = "nsubj";
        } else if (i > 0 && (prev == Lex::kPrep || prev == Lex::kTo)) {
          l = "pobj";
        } else {
          l = "dobj";
        }
        break;
      case Lex::kAdv:
        l = "advmod";
        break;
      case Lex::kAdj:
        l = (has_next && (IsNominal(next) || next == Lex::kAdj)) ? "amod"
                                                                 : "acomp";
        break;
      case Lex::kVerb: {
        int j = i - 1;
        while (j >= 0 && (lex[j] == Lex::kAdv || lex[j] == Lex::kNeg ||
                          lex[j] == Lex::kAux)) {
          --j;
        }
        const Lex before = j >= 0 ? lex[j] : Lex::kPrep;
        if (j >= 0 && before == Lex::kTo) {
          l = "xcomp";
        } else if (j >= 0 && before == Lex::kCc) {
          l = "conj";
        } else if (EndsWith(lower[i], "ing") && j >= 0 && IsNominal(before)) {
          l = "acl";
        } else {
          bool clause_mark = false;
          for (int m = i - 1; m >= 0 && !IsVerbal(lex[m]); --m) {
            clause_mark |= lex[m] == Lex::kMark;
          }
          l = clause_mark ? "advcl" : "ccomp";
        }
        seen_verb = true;
        break;
      }
      case Lex::kNoun:
      case Lex::kPropn: {
        if (has_next && IsNominal(next) && lex[i + 1] != Lex::kNum) {
          l = "compound";
          break;
        }
        int j = i - 1;
        while (j >= 0 && (lex[j] == Lex::kDet || lex[j] == Lex::kAdj ||
                          lex[j] == Lex::kPoss || lex[j] == Lex::kNum ||
                          lex[j] == Lex::kPredet ||
                          (IsNominal(lex[j]) && label[j] == "compound"))) {
          --j;
        }
        const Lex before = j >= 0 ? lex[j] : Lex::kMark;
        if (j >= 0 && (before == Lex::kPrep || before == Lex::kTo)) {
          l = "pobj";
          head[i] = j;
        } else if (j >= 0 && before == Lex::kCc) {
          l = "conj";
        } else if (!seen_verb) {
          l = "nsubj";
        } else if (j >= 0 && IsVerbal(before)) {
          l = "dobj";
        } else {
          l = "npadvmod";
        }
        break;
      }
    }
    if (lex[i] == Lex::kVerb || lex[i] == Lex::kAux) seen_verb = true;
  }
  // Pre-nominal modifiers attach to the next nominal on their right.
  for (int i = 0; i < n; ++i) {
    if (i == root) continue;
    const std::string& l = label[i];
    if (l == "det" || l == "predet" || l == "amod" || l == "poss" ||
        l == "nummod" || l == "compound") {
      for (int j = i + 1; j < n; ++j) {
        if (IsNominal(lex[j]) || lex[j] == Lex::kPron) {
          head[i] = j;
          break;
        }
      }
    }
  }
  Json out = Json::array();
  for (int i = 0; i < n; ++i) {
    out.push_back({{"head", i == root ? Json(nullptr) : Json(head[i])},
                   {"label", label[i]}});
  }
  return Json{{"words", out}};
}

Json ToyModel::Ner(const std::vector<std::string>& words) const {
  const int n = static_cast<int>(words.size());
  Json entities = Json::array();
  int i = 0;
  while (i < n) {
    if (Classify(words, i) != Lex::kPropn) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && Classify(words, j + 1) == Lex::kPropn) ++j;
    entities.push_back({{"start", i}, {"end", j}, {"kind", "PROPN"}});
    i = j + 1;
  }
  return Json{{"entities", entities}};
}

double ToyModel::Nli(std::string_view premise,
                     std::string_view hypothesis) const {
  std::map<std::string, int> available;
  int premise_negations = 0;
  for (const std::string& w : Words(premise)) {
    const std::string lower = AsciiLower(w);
    ++available[lower];
    premise_negations += Lexicon().count(lower) &&
                         Lexicon().at(lower) == Lex::kNeg;
  }
  double total = 0;
  double matched = 0;
  int hypothesis_negations = 0;
  for (const std::string& w : Words(hypothesis)) {
    const std::string lower = AsciiLower(w);
    const double weight = EnglishStopwords().count(lower) ? 0.25 : 1.0;
    total += weight;
    auto it = available.find(lower);
    if (it != available.end() && it->second > 0) {
      --it->second;
      matched += weight;
    }
    hypothesis_negations += Lexicon().count(lower) &&
                            Lexicon().at(lower) == Lex::kNeg;
  }
  if (total == 0) return 1.0;
  double score = matched / total;
  if ((premise_negations % 2) != (hypothesis_negations % 2)) score *= 0.2;
  return std::clamp(score, 0.0, 1.0);
}

std::vector<double> ToyModel::Embed(std::string_view text) const {
  std::vector<double> v(kToyEmbedDim, 0.0);
  auto add = [&v](std::string_view feature, double weight) {
    const std::uint64_t h = HashBytes(feature, 0x656d62);
    v[h % kToyEmbedDim] += ((h >> 32) & 1) ? weight : -weight;
  };
  for (const std::string& w : Words(text)) {
    const std::string lower = AsciiLower(w);
    add(lower, 1.0);
    const std::string padded = " " + lower + " ";
    for (size_t i = 0; i + 3 <= padded.size(); ++i) {
      add(std::string_view(padded).substr(i, 3), 0.35);
    }
  }
  double norm = 0;
  for (double x : v) norm += x * x;
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

Json ToyModel::Handle(const Json& request) const {
  const std::string id =
      request.is_object() && request.contains("id") && request["id"].is_string()
          ? request["id"].get<std::string>()
          : std::string();
  absl::Status valid = ValidateRequest(request);
  if (!valid.ok()) {
    return ErrorResponse(id, "BadRequest", std::string(valid.message()));
  }
  const Op op = ParseOp(request["op"].get<std::string>()).value();
  switch (op) {
    case Op::kInfill: {
      const std::string text = request["text"].get<std::string>();
      const auto masks = request["masks"].get<std::vector<int>>();
      const int n = static_cast<int>(Words(text).size());
      for (int m : masks) {
        if (m >= n) {
          return ErrorResponse(id, "BadRequest",
                               "mask " + std::to_string(m) + " beyond " +
                                   std::to_string(n) + " words");
        }
      }
      return OkResponse(request, Infill(text, masks, request["k"].get<int>()));
    }
    case Op::kParse:
      return OkResponse(request,
                        Parse(request["words"].get<std::vector<std::string>>()));
    case Op::kNer:
      return OkResponse(request,
                        Ner(request["words"].get<std::vector<std::string>>()));
    case Op::kNli:
      return OkResponse(
          request, Json{{"entailment",
                         Nli(request["premise"].get<std::string>(),
                             request["hypothesis"].get<std::string>())}});
    case Op::kEmbed:
      return OkResponse(
          request, Json{{"vector", Embed(request["text"].get<std::string>())}});
  }
  return ErrorResponse(id, "BadRequest", "unhandled op");
}

}  // namespace nlwm
