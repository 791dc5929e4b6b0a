// Fixed prompt texts of the judge templates.

#include "liteval/llm_judge.hpp"

namespace liteval {

namespace {

constexpr const char* kOriginalSystem =
    "You are an annotator for the quality of machine translation. Your task is to identify "
    "errors and assess the quality of the translation.";

constexpr const char* kLiterarySystem =
    "As a literary translation critic, your role is to identify errors and evaluate the "
    "translation's quality. Focus on the subtleties of literary style, emotional impact, and "
    "creative expression. An excellent translation captures the original work's aesthetic "
    "qualities, tone, and cultural nuances, rather than adhering to a word-for-word approach. "
    "Translations that are excessively literal and fail to adapt to the target language's "
    "literary conventions and natural flow should be critiqued accordingly.";

constexpr const char* kErrorInstruction =
    "Based on the source segment and machine translation surrounded with triple backticks, "
    "identify error types in the translation and classify them. The categories of errors are: "
    "accuracy (addition, omission, misnomer, mistranslation [including too-literal translation "
    "and temporal effect], untranslated text), fluency (inconsistency, coherence, grammar, "
    "punctuation, spelling), style (awkward, register, inconsistent, unidiomatic), terminology "
    "(inappropriate for context, inconsistent use, please pay attention to cultural specific "
    "items and extra-linguistic terms), non-translation, other, locale convention, or no error.\n"
    "Each error is classified as one of three categories: critical, major, and minor. Critical "
    "errors inhibit comprehension of the text. Major errors disrupt the flow, but what the text "
    "is trying to say is still understandable. Minor errors are technically errors, but do not "
    "disrupt the flow or hinder comprehension.";

// Same wording as the literary system prompt, with typographic apostrophes.
constexpr const char* kRubricSystem =
    "As a literary translation critic, your role is to identify errors and evaluate the "
    "translation’s quality. Focus on the subtleties of literary style, emotional impact, and "
    "creative expression. An excellent translation captures the original work’s aesthetic "
    "qualities, tone, and cultural nuances, rather than adhering to a word-for-word approach. "
    "Translations that are excessively literal and fail to adapt to the target language’s "
    "literary conventions and natural flow should be critiqued accordingly.";

constexpr const char* kRubricInstruction =
    "###Task Description:\n"
    "An instruction (might include an Input inside it), a response to evaluate, and a score "
    "rubric representing a evaluation criteria are given.\n"
    "1. Write a detailed feedback that assess the quality of the response strictly based on the "
    "given score rubric, not evaluating in general.\n"
    "2. After writing a feedback, write a score that is one of 0, 2, 4, or 6. You should refer to "
    "the score rubric.\n"
    "3. The output format should look as follows: \"(write a feedback for criteria) [RESULT] "
    "(one of 0, 2, 4, or 6)\"\n"
    "4. Please do not generate any other opening, closing, and explanations.";

PromptTemplate make_original() {
  PromptTemplate t;
  t.id = TemplateId::gemba_original;
  t.system_text = kOriginalSystem;
  t.instruction_text = kErrorInstruction;
  t.few_shots = {
      {"English",
       "I do apologise about this, we must gain permission from the account holder to discuss an "
       "order with another person, I apologise if this was done previously, however, I would not "
       "be able to discuss this with yourself without the account holders permission.",
       "German",
       "Ich entschuldige mich dafür, wir müssen die Erlaubnis einholen, um eine Bestellung mit "
       "einer anderen Person zu besprechen. Ich entschuldige mich, falls dies zuvor geschehen "
       "wäre, aber ohne die Erlaubnis des Kontoinhabers wäre ich nicht in der Lage, dies mit dir "
       "involvement.",
       "Critical:\nno-error\nMajor:\naccuracy/mistranslation - \"involvement\"\n"
       "accuracy/omission - \"the account holder\"\nMinor:\nfluency/grammar - \"wäre\"\n"
       "style/register - \"dir\""},
      {"Chinese",
       "大众点评乌鲁木齐家居卖场频道为您提供高铁居然之家地址，电话，营业时间等最新商户信息，"
       "找装修公司，就上大众点评",
       "English",
       "Urumqi Home Furnishing Store Channel provides you with the latest business information "
       "such as the address, telephone number, business hours, etc., of high-speed rail, and "
       "find a decoration company, and go to the reviews.",
       "Critical:\naccuracy/addition - \"of high-speed rail\"\nMajor:\n"
       "accuracy/mistranslation - \"go to the reviews\"\nMinor:\nstyle/awkward - \"etc.,\""},
  };
  return t;
}

PromptTemplate make_literary() {
  PromptTemplate t;
  t.id = TemplateId::gemba_literary;
  t.system_text = kLiterarySystem;
  t.instruction_text = kErrorInstruction;
  t.few_shots = {
      {"English",
       "At intervals, while turning over the leaves of my book, I studied the aspect of that "
       "winter afternoon.",
       "German",
       "Von Zeit zu Zeit, während ich in meinem Buch blätterte, studierte ich das Aussehen "
       "dieses Winternachmittags.",
       "Critical:\naccuracy/mistranslation (Too-literal) - \"studierte\"\nMajor:\n"
       "accuracy/omission - \"das Aussehen\"\nMinor:\nno-error"},
      {"Chinese", "太阳他有脚啊，轻轻悄悄地挪移了。", "English",
       "The sun he has feet, ah, gently and quietly moved.",
       "Critical:\nstyle/awkward - \"ah\"\nMajor:\nfluency/grammar - \"gently and quietly "
       "moved\"\nMinor:\naccuracy/mistranslation (Too-literal) - \"he has feet\""},
  };
  return t;
}

PromptTemplate make_rubric() {
  PromptTemplate t;
  t.id = TemplateId::rubric_sqm;
  t.system_text = kRubricSystem;
  t.instruction_text = kRubricInstruction;
  t.rubric = RubricData{
      "What is the overall quality of the given literary translation based on the source texts?",
      "Nonsense: Nearly all information is lost between the translation and source. Grammar and "
      "style are irrelevant.",
      "Some Meaning and Style Preserved: The translation preserves some of the meaning and style "
      "of the source but misses significant parts. The narrative is hard to follow due to "
      "fundamental errors. Grammar may be poor. Style may be inconsistent.",
      "Most Meaning and Style Preserved and Few Grammar Mistakes: The translation retains most of "
      "the meaning and style of the source. This may contain some grammar mistakes or minor style "
      "and contextual inconsistencies.",
      "Perfect Meaning and Style Preserved: The meaning and style of the translation are "
      "completely consistent with the source and the surrounding context.",
  };
  return t;
}

}  // namespace

const PromptTemplate& prompt_template(TemplateId id) {
  static const PromptTemplate original = make_original();
  static const PromptTemplate literary = make_literary();
  static const PromptTemplate rubric = make_rubric();
  switch (id) {
    case TemplateId::gemba_original: return original;
    case TemplateId::gemba_literary: return literary;
    case TemplateId::rubric_sqm: return rubric;
  }
  return literary;
}

}  // namespace liteval
