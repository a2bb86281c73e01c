#include "spamlens/synthgen.hpp"

namespace spamlens::synthgen {
namespace {

struct VocabEntry {
  const char* newsgroup;
  std::vector<std::string> words;
};

// Hand-picked salient words per newsgroup. Words shared between two
// newsgroups always share the same unified topic, so classifier confusion
// inside a topic cannot leak across topics.
const std::vector<VocabEntry>& vocab_table() {
  static const std::vector<VocabEntry> table = {
      {"comp.graphics",
       {"graphics", "rendering", "pixel", "texture", "opengl", "shader",
        "polygon", "animation", "raster", "palette", "jpeg", "resolution",
        "render", "sprite", "bitmap", "viewport", "mesh", "framebuffer",
        "antialias", "raytrace"}},
      {"comp.os.ms-windows.misc",
       {"windows", "driver", "registry", "dll", "install", "reboot",
        "bluescreen", "taskbar", "icon", "folder", "microsoft", "patch",
        "setup", "config", "update", "crash", "desktop", "shortcut",
        "notepad", "autoexec"}},
      {"comp.sys.ibm.pc.hardware",
       {"motherboard", "bios", "cpu", "ram", "ide", "scsi", "controller",
        "jumper", "slot", "chipset", "floppy", "drive", "socket", "hardware",
        "dimm", "heatsink", "overclock", "firmware", "cache", "bus"}},
      {"comp.sys.mac.hardware",
       {"mac", "apple", "macintosh", "powerbook", "quadra", "monitor",
        "adapter", "keyboard", "trackpad", "logicboard", "display", "battery",
        "dock", "port", "cable", "chip", "nubus", "appletalk", "imac",
        "rom"}},
      {"comp.windows.x",
       {"x11", "xterm", "motif", "widget", "xserver", "client", "font",
        "xlib", "session", "screen", "workstation", "keymap", "cursor",
        "pixmap", "window", "manager", "callback", "toolkit", "xresources",
        "xclock"}},
      {"sci.electronics",
       {"circuit", "voltage", "resistor", "capacitor", "amplifier",
        "transistor", "diode", "oscillator", "signal", "frequency", "ohm",
        "solder", "breadboard", "schematic", "current", "sensor", "analog",
        "inductor", "multimeter", "relay"}},
      {"misc.forsale",
       {"sale", "price", "offer", "shipping", "condition", "sell", "buy",
        "auction", "bargain", "discount", "deal", "item", "brand", "warranty",
        "invoice", "stock", "order", "catalog", "wholesale", "mint"}},
      {"rec.autos",
       {"car", "engine", "sedan", "brake", "tire", "dealer", "mileage",
        "transmission", "fuel", "horsepower", "coupe", "chassis", "garage",
        "highway", "torque", "wheel", "gasoline", "spoiler", "convertible",
        "odometer"}},
      {"rec.motorcycles",
       {"motorcycle", "bike", "rider", "helmet", "throttle", "clutch",
        "handlebar", "cruiser", "sportbike", "exhaust", "saddle", "ride",
        "biker", "chain", "fairing", "kickstand", "touring", "moto",
        "sidecar", "twostroke"}},
      {"rec.sport.baseball",
       {"baseball", "pitcher", "inning", "batter", "homerun", "league",
        "catcher", "shortstop", "bullpen", "dugout", "umpire", "strikeout",
        "outfield", "roster", "bat", "mound", "fastball", "hitter", "season",
        "curveball"}},
      {"rec.sport.hockey",
       {"hockey", "goalie", "puck", "rink", "defenseman", "slapshot", "nhl",
        "playoff", "skate", "stick", "icing", "powerplay", "goaltender",
        "forward", "penalty", "zamboni", "faceoff", "period", "arena",
        "hattrick"}},
      {"sci.crypt",
       {"encryption", "cipher", "cryptography", "decrypt", "rsa", "plaintext",
        "ciphertext", "privacy", "keyspace", "protocol", "signature",
        "entropy", "escrow", "wiretap", "secure", "cryptosystem", "nonce",
        "keypair", "cryptanalysis", "onetime"}},
      {"sci.med",
       {"doctor", "patient", "disease", "treatment", "medicine", "symptom",
        "diagnosis", "therapy", "clinical", "infection", "vaccine", "dosage",
        "physician", "hospital", "chronic", "syndrome", "antibiotic",
        "prescription", "allergy", "migraine"}},
      {"sci.space",
       {"orbit", "satellite", "rocket", "launch", "nasa", "shuttle",
        "astronaut", "lunar", "planet", "spacecraft", "telescope", "mission",
        "mars", "gravity", "solar", "propulsion", "payload", "reentry",
        "booster", "apogee"}},
      {"talk.politics.guns",
       {"firearm", "rifle", "pistol", "ammunition", "amendment", "militia",
        "holster", "caliber", "handgun", "permit", "concealed", "hunter",
        "trigger", "weapon", "ban", "shooting", "gunowner", "sidearm",
        "reload", "carry"}},
      {"talk.politics.mideast",
       {"israel", "arab", "palestinian", "lebanon", "turkey", "armenia",
        "territory", "border", "conflict", "treaty", "diplomat", "embassy",
        "occupation", "refugee", "negotiation", "region", "war", "homeland",
        "ceasefire", "peace"}},
      {"talk.politics.misc",
       {"policy", "congress", "senator", "election", "tax", "liberal",
        "conservative", "government", "president", "vote", "campaign",
        "reform", "budget", "partisan", "lobbyist", "democrat", "republican",
        "legislation", "senate", "veto"}},
      {"talk.religion.misc",
       {"religion", "faith", "belief", "scripture", "moral", "doctrine",
        "worship", "spiritual", "prayer", "sacred", "theology", "sermon",
        "ritual", "prophet", "commandment", "soul", "divine", "creed",
        "pilgrim", "tenet"}},
      {"alt.atheism",
       {"atheist", "atheism", "skeptic", "rational", "secular", "agnostic",
        "freethinker", "dogma", "evidence", "existence", "reason", "deity",
        "disbelief", "superstition", "blasphemy", "heresy", "nonbeliever",
        "materialism", "naturalism", "doubt"}},
      {"soc.religion.christian",
       {"christian", "christ", "jesus", "bible", "church", "gospel",
        "apostle", "salvation", "grace", "verse", "psalm", "resurrection",
        "baptism", "ministry", "congregation", "testament", "disciple",
        "savior", "communion", "parish"}},
  };
  return table;
}

}  // namespace

const std::map<std::string, std::vector<std::string>>& newsgroup_vocab() {
  static const std::map<std::string, std::vector<std::string>> vocab = [] {
    std::map<std::string, std::vector<std::string>> v;
    for (const auto& entry : vocab_table()) v.emplace(entry.newsgroup, entry.words);
    return v;
  }();
  return vocab;
}

}  // namespace spamlens::synthgen
