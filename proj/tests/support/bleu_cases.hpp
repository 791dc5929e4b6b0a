#pragma once

#include "liteval/textstats.hpp"

namespace fixtures {

struct BleuCase {
  const char* hyp;
  const char* ref;
  liteval::BleuTokenizer tok;
  double expected;
};

// Reference values from sacrebleu 2.6.0 sentence_bleu with default options.
inline const BleuCase kBleuCases[] = {
    {"The cat sat on the mat.", "The cat sat on the mat.", liteval::BleuTokenizer::intl_13a, 100.00000000000004},
    {"The cat sat on the mat.", "A cat was sitting on the mat.", liteval::BleuTokenizer::intl_13a, 37.68499164492418},
    {"the the the the", "The cat is on the mat.", liteval::BleuTokenizer::intl_13a, 7.545383788761362},
    {"He lay on his back.", "He was lying on his back.", liteval::BleuTokenizer::intl_13a, 45.48019047027906},
    {"One morning, as Gregor Samsa woke, he found himself transformed.",
     "When Gregor Samsa woke up one morning, he found himself transformed.", liteval::BleuTokenizer::intl_13a,
     51.424016050282624},
    {"The rain would not stop.", "The rain did not stop.", liteval::BleuTokenizer::intl_13a, 37.99178428257963},
    {"She waited at the window until it got dark.", "She kept watch at the window until night fell.",
     liteval::BleuTokenizer::intl_13a, 29.071536848410968},
    {"Hello", "Hello world", liteval::BleuTokenizer::intl_13a, 36.78794411714425},
    {"completely different words here", "nothing shared at all", liteval::BleuTokenizer::intl_13a, 0.0},
    {"It's 3.5 km (roughly) -- isn't it?", "It is 3.5 km, roughly; isn't it?", liteval::BleuTokenizer::intl_13a,
     20.556680845025987},
    {"Der Regen hörte nicht auf.", "Der Regen hörte nie auf.", liteval::BleuTokenizer::intl_13a, 37.99178428257963},
    {"a b c d e f g h", "a b c d e f g h i j k l", liteval::BleuTokenizer::intl_13a, 60.653065971263366},
    {"a b c d e f g h i j k l", "a b c d e f g h", liteval::BleuTokenizer::intl_13a, 61.32297420585347},
    {"x y", "x y", liteval::BleuTokenizer::intl_13a, 100.00000000000004},
    {"火车又晚点了。", "火车又迟到了。", liteval::BleuTokenizer::char_cjk, 30.739407647563215},
    {"站台上似乎没有人感到惊讶。", "站台上的人似乎谁也不觉得意外。", liteval::BleuTokenizer::char_cjk, 13.485078167116281},
    {"这是一个举世公认的真理。", "这是一个普遍公认的真理。", liteval::BleuTokenizer::char_cjk, 63.40466277046863},
    {"GPT-4o 翻译了 3 段文字。", "GPT-4o 翻译了三段文字。", liteval::BleuTokenizer::char_cjk, 59.694917920196445},
    {"凡是有钱的单身汉，总想娶位太太。", "凡是有钱的单身汉，总想娶位太太。", liteval::BleuTokenizer::char_cjk,
     100.00000000000004},
    {"The quick brown fox jumps over the lazy dog & runs.",
     "The quick brown fox jumped over the lazy dog and ran.", liteval::BleuTokenizer::intl_13a, 43.66835442847811},
};

}  // namespace fixtures
