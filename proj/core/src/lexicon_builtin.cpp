#include "spamlens/sentiment.hpp"

namespace spamlens::sentiment {
namespace {

struct Entry {
  const char* token;
  double valence;
};

// Small general-purpose valence list; the synthetic reply generator draws
// from the same vocabulary so offline runs carry real signal.
const Entry kBuiltinLexicon[] = {
    {"amazing", 0.85},    {"awesome", 0.9},     {"beautiful", 0.75},
    {"best", 0.8},        {"brilliant", 0.85},  {"celebrate", 0.6},
    {"congrats", 0.7},    {"cool", 0.5},        {"delight", 0.7},
    {"enjoy", 0.6},       {"excellent", 0.9},   {"excited", 0.65},
    {"fantastic", 0.9},   {"favorite", 0.6},    {"fun", 0.55},
    {"glad", 0.5},        {"good", 0.7},        {"great", 0.8},
    {"happy", 0.7},       {"helpful", 0.6},     {"impressive", 0.7},
    {"inspiring", 0.7},   {"interesting", 0.4}, {"love", 0.85},
    {"lovely", 0.7},      {"nice", 0.55},       {"perfect", 0.9},
    {"pleased", 0.55},    {"recommend", 0.5},   {"smart", 0.5},
    {"solid", 0.4},       {"superb", 0.85},     {"thanks", 0.5},
    {"useful", 0.55},     {"win", 0.6},         {"wonderful", 0.85},
    {"wow", 0.6},

    {"angry", -0.7},      {"annoying", -0.6},   {"awful", -0.85},
    {"bad", -0.6},        {"boring", -0.5},     {"broken", -0.55},
    {"disappointed", -0.65}, {"disgusting", -0.85}, {"dreadful", -0.8},
    {"fail", -0.6},       {"fake", -0.65},      {"garbage", -0.75},
    {"hate", -0.85},      {"horrible", -0.9},   {"junk", -0.65},
    {"lies", -0.7},       {"lose", -0.5},       {"mess", -0.5},
    {"misleading", -0.6}, {"nasty", -0.7},      {"pathetic", -0.75},
    {"poor", -0.55},      {"sad", -0.5},        {"scam", -0.9},
    {"spam", -0.8},       {"stupid", -0.7},     {"terrible", -0.85},
    {"ugly", -0.6},       {"useless", -0.7},    {"waste", -0.65},
    {"worst", -0.9},      {"wrong", -0.5},
};

}  // namespace

const SentimentLexicon& SentimentLexicon::builtin() {
  static const SentimentLexicon lex = [] {
    SentimentLexicon l;
    for (const auto& e : kBuiltinLexicon) l.valence.emplace(e.token, e.valence);
    return l;
  }();
  return lex;
}

}  // namespace spamlens::sentiment
