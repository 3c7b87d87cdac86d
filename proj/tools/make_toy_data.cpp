// Generates the committed toy dataset: a 200-passage corpus over five topics,
// three 5-turn dialogues with PTKB statements, and overlap-seeded qrels.
// Output is a pure function of the hard-coded seed; randomness comes from raw
// mt19937 draws only, so regeneration is byte-identical on any platform.

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "convsearch/tokenizer.hpp"

namespace {

using nlohmann::json;

struct Topic {
  std::string name;
  std::vector<std::string> words;
};

const std::vector<Topic> kTopics = {
    {"cooking",
     {"vegetarian", "protein", "sources", "diet", "lentils", "tofu", "beans",
      "iron", "spinach", "recipe", "cook", "chickpeas", "snack", "peanut",
      "almond", "breakfast", "oats", "stew", "simmer", "nutrition", "ideas",
      "rich"}},
    {"hiking",
     {"trail", "hike", "boots", "pack", "summit", "ridge", "blister",
      "waterproof", "tent", "elevation", "alpine", "permit", "creek",
      "switchback", "layers", "poles", "map", "shelter", "heel", "pitch",
      "day", "prevent"}},
    {"astronomy",
     {"telescope", "beginner", "aperture", "nebula", "galaxy", "eyepiece",
      "refractor", "reflector", "tripod", "city", "cluster", "planets",
      "saturn", "jupiter", "comet", "light", "filter", "darkness", "sky",
      "binoculars", "budget"}},
    {"coffee",
     {"espresso", "grinder", "roast", "arabica", "brewing", "filter", "pour",
      "crema", "beans", "kettle", "temperature", "extraction", "bitter",
      "acidity", "aeropress", "barista", "latte", "caffeine", "decaf", "cup"}},
    {"cycling",
     {"derailleur", "chain", "puncture", "saddle", "commute", "helmet",
      "gears", "brake", "tire", "pannier", "lube", "spoke", "frame", "pedal",
      "valve", "pump", "cassette", "handlebar", "fender", "tube"}},
};

const std::vector<std::string> kFiller = {
    "guide", "covers", "explains", "common", "choices", "about", "with",
    "good", "options", "care", "basics", "advice", "details", "tips"};

struct TurnSpec {
  std::string utterance;
  std::string response;
  std::string gold_query;  // resolved intent, drives the qrels
};

struct DialogueSpec {
  std::string id;
  std::size_t topic;
  std::vector<std::pair<std::string, std::string>> ptkb;
  std::vector<TurnSpec> turns;
};

const std::vector<DialogueSpec> kDialogues = {
    {"td1",
     0,
     {{"p1", "I am vegetarian"},
      {"p2", "I am allergic to peanut snacks"},
      {"p3", "I commute by bicycle"}},
     {{"What are good protein sources for a vegetarian diet?",
       "Lentils, tofu, beans and chickpeas are solid vegetarian protein sources.",
       "vegetarian protein sources lentils tofu beans chickpeas"},
      {"Which of them are rich in iron?",
       "Lentils and spinach bring the most iron per serving.",
       "vegetarian protein iron lentils spinach"},
      {"How do I cook them without losing the nutrition?",
       "Simmer lentils gently and season the stew late.",
       "cook lentils stew simmer nutrition season"},
      {"I am allergic to peanut snacks. What can I snack on instead?",
       "Almond based snacks avoid the peanut problem.",
       "snack alternatives peanut allergy almond"},
      {"Any quick breakfast ideas using those?",
       "Overnight oats with almond and spinach work well.",
       "vegetarian breakfast ideas oats almond"}}},
    {"td2",
     1,
     {{"p1", "I hike with a heavy tent"}, {"p2", "My boots are waterproof"}},
     {{"Which trail should I take for a two day hike?",
       "Pick the ridge trail with a creek crossing and a shelter midway.",
       "two day hike trail ridge creek shelter"},
      {"Is there a permit needed for it?",
       "The ridge trail needs a summit permit in summer.",
       "ridge trail summit permit"},
      {"What should I pack for the elevation change?",
       "Layers, poles and a waterproof shell handle the elevation.",
       "pack elevation layers poles waterproof"},
      {"My boots gave me a blister last time. How do I prevent that?",
       "Break the boots in and tape the heel before the switchbacks.",
       "prevent blister boots heel tape"},
      {"And where do I pitch the tent?",
       "Pitch the tent near the shelter below the summit.",
       "pitch tent shelter summit"}}},
    {"td3",
     2,
     {{"p1", "I live in a city with bright skies"},
      {"p2", "My budget for a telescope is small"}},
     {{"What telescope is good for a beginner?",
       "A small refractor on a stable tripod is the classic start.",
       "beginner telescope refractor tripod"},
      {"Would it show the planets clearly?",
       "Saturn and jupiter resolve nicely with a decent eyepiece.",
       "telescope planets saturn jupiter eyepiece"},
      {"What about deep sky objects like nebulae?",
       "A nebula needs darkness and aperture more than magnification.",
       "nebula galaxy aperture darkness"},
      {"Does my city's light ruin that?",
       "Bright skies wash out faint clusters; a filter helps a little.",
       "city light pollution filter cluster"},
      {"Any cheaper alternative before I buy one?",
       "Binoculars show clusters and the brighter comets first.",
       "binoculars clusters comet budget"}}},
};

std::string pad3(std::size_t n) {
  char buffer[8];
  std::snprintf(buffer, sizeof(buffer), "%03zu", n);
  return buffer;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_dir = argc > 1 ? argv[1] : "data/toy";
  std::filesystem::create_directories(out_dir);
  std::mt19937 gen(20250108u);

  // Corpus: 40 docs per topic, each a bag of topic words plus filler.
  std::vector<std::pair<std::string, std::string>> docs;
  for (std::size_t i = 0; i < 200; ++i) {
    const Topic& topic = kTopics[i % kTopics.size()];
    const std::size_t n_words = 6 + gen() % 5;
    std::string text = "This " + topic.name + " " +
                       kFiller[gen() % kFiller.size()];
    std::vector<std::string> pool = topic.words;  // draw without replacement
    for (std::size_t w = 0; w < n_words; ++w) {
      const std::uint32_t kind = gen() % 10;
      if (kind < 8 && !pool.empty()) {
        const std::size_t pick = gen() % pool.size();
        text += " " + pool[pick];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      } else if (kind < 9) {
        text += " " + kFiller[gen() % kFiller.size()];
      } else {
        const Topic& other = kTopics[gen() % kTopics.size()];
        text += " " + other.words[gen() % other.words.size()];
      }
    }
    text += ".";
    docs.emplace_back("d" + pad3(i), text);
  }

  std::ofstream corpus(out_dir + "/corpus.jsonl", std::ios::binary);
  for (const auto& [docid, text] : docs) {
    corpus << json{{"docid", docid}, {"text", text}}.dump() << "\n";
  }

  // Dialogues.
  json dialogues = json::array();
  for (const DialogueSpec& spec : kDialogues) {
    json d;
    d["dialogue_id"] = spec.id;
    json ptkb = json::array();
    for (const auto& [id, text] : spec.ptkb) {
      ptkb.push_back({{"id", id}, {"text", text}});
    }
    d["ptkb"] = ptkb;
    json turns = json::array();
    for (std::size_t t = 0; t < spec.turns.size(); ++t) {
      turns.push_back({{"turn_id", std::to_string(t + 1)},
                       {"utterance", spec.turns[t].utterance},
                       {"response", spec.turns[t].response}});
    }
    d["turns"] = turns;
    dialogues.push_back(d);
  }
  std::ofstream dialogue_file(out_dir + "/dialogues.json", std::ios::binary);
  dialogue_file << json{{"dialogues", dialogues}}.dump(2) << "\n";

  // Qrels: grade by distinct content-token overlap with the gold query.
  std::ofstream qrels(out_dir + "/qrels.txt", std::ios::binary);
  for (const DialogueSpec& spec : kDialogues) {
    for (std::size_t t = 0; t < spec.turns.size(); ++t) {
      const std::string qid = spec.id + "_" + std::to_string(t + 1);
      std::set<std::string> gold;
      for (const auto& token : convsearch::tokenize(spec.turns[t].gold_query)) {
        if (token.size() >= 3) {
          gold.insert(token);
        }
      }
      std::vector<std::pair<std::string, std::size_t>> hits;
      for (const auto& [docid, text] : docs) {
        std::set<std::string> doc_tokens;
        for (const auto& token : convsearch::tokenize(text)) {
          doc_tokens.insert(token);
        }
        std::size_t overlap = 0;
        for (const std::string& token : gold) {
          overlap += doc_tokens.contains(token) ? 1 : 0;
        }
        if (overlap >= 2) {
          hits.emplace_back(docid, overlap);
        }
      }
      std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
          return a.second > b.second;
        }
        return a.first < b.first;
      });
      if (hits.size() > 12) {
        hits.resize(12);
      }
      for (const auto& [docid, overlap] : hits) {
        const std::size_t grade = std::min<std::size_t>(3, overlap - 1);
        qrels << qid << " 0 " << docid << " " << grade << "\n";
      }
    }
  }

  std::cerr << "wrote " << docs.size() << " passages, " << kDialogues.size()
            << " dialogues -> " << out_dir << "\n";
  return 0;
}
