"""Bundled word -> Universal POS tag lexicon for the fallback tagger.

Hand-assembled from high-frequency caption vocabulary (function words plus
the most common nouns/verbs/adjectives seen in video- and image-description
corpora). Lookups are lowercase. Unknown words fall back to suffix
heuristics in textproc.builtin_pos.
"""

LEXICON: dict[str, str] = {}

_DET = ("a an the this that these those some any every each no another "
        "both all either neither").split()
_PRON = ("he she it they we you i him her them us me his hers its their "
         "theirs our ours your yours mine who whom whose something someone "
         "anything anyone everything everyone nothing nobody itself himself "
         "herself themselves").split()
_ADP = ("in on at by for with from to of into onto over under above below "
        "about against between among through during before after behind "
        "beside near across around along down up off out inside outside "
        "toward towards upon within without past via").split()
_CONJ = "and or but nor so yet".split()
_SCONJ = "while because although though if when since as until unless whereas".split()
_AUX = ("is are was were be been being am do does did done has have had "
        "having will would can could shall should may might must").split()
_ADV = ("very quickly slowly not now then here there again also just only "
        "together away back fast well too still almost really quite never "
        "always often outdoors indoors").split()
_NUM = ("one two three four five six seven eight nine ten zero first second "
        "third").split()
_PART = ["'s"]

_VERBS = ("run walk jump play sing dance talk speak eat drink cook ride "
          "drive fly swim climb sit stand hold throw catch kick hit cut "
          "wash clean open close pour mix stir put take make get go come "
          "look watch see show wear carry pull push slice peel fry move "
          "turn spin roll fall laugh smile cry shoot score win lose try "
          "use give read write draw paint feed pet chase lift bend stretch "
          "perform demonstrate explain apply remove add wrap fold brush "
          "comb wave point say tell ask answer begin start stop finish "
          "land travel race fight hug kiss sleep wake rest lie lay jog "
          "skate ski surf dive juggle knit sew type film record").split()
_NOUNS = ("man woman boy girl person people child children kid baby lady "
          "guy dog cat horse bird fish elephant monkey lion tiger bear cow "
          "sheep goat chicken rabbit snake mouse panda car truck bus train "
          "plane airplane bike bicycle motorcycle boat ship road street "
          "ball game video music song guitar piano drum violin food cake "
          "bread rice soup meat egg vegetable fruit apple banana orange "
          "potato onion tomato water milk juice tea coffee bowl plate cup "
          "glass knife fork spoon pan pot oven stove kitchen room house "
          "building field park garden beach ocean sea river lake mountain "
          "tree flower grass sky sun moon rain snow hair face hand arm leg "
          "foot head eye mouth nose table chair bed sofa floor wall door "
          "window phone computer camera screen television tv paper book "
          "pen pencil bag box bottle toy doll shirt dress hat shoe sock "
          "coat jacket pants crowd group team player singer dancer chef "
          "doctor teacher student audience stage court pool gym track "
          "court basket goal net bat racket board wheel engine wing tail "
          "paw fur feather scene clip movie show city town village market "
          "store shop restaurant").split()
_ADJ = ("big small large little long short tall high low old young new red "
        "blue green yellow black white brown pink purple gray orange dark "
        "light hot cold warm cool fast slow happy sad angry beautiful "
        "pretty cute funny wet dry dirty clean empty full open closed "
        "wooden plastic metal round square flat soft hard loud quiet "
        "several many few other same different front left right middle "
        "male female").split()

for _w in _DET:
    LEXICON[_w] = "DET"
for _w in _PRON:
    LEXICON[_w] = "PRON"
for _w in _ADP:
    LEXICON[_w] = "ADP"
for _w in _CONJ:
    LEXICON[_w] = "CCONJ"
for _w in _SCONJ:
    LEXICON[_w] = "SCONJ"
for _w in _AUX:
    LEXICON[_w] = "AUX"
for _w in _ADV:
    LEXICON[_w] = "ADV"
for _w in _NUM:
    LEXICON[_w] = "NUM"
for _w in _PART:
    LEXICON[_w] = "PART"
for _w in _ADJ:
    LEXICON[_w] = "ADJ"
for _w in _NOUNS:
    LEXICON[_w] = "NOUN"
# Verb lemmas last so they win over any accidental overlap above, and
# common irregular forms that suffix stripping cannot reach.
for _w in _VERBS:
    LEXICON[_w] = "VERB"
for _w in ("ran went came saw ate drank drove flew swam sat stood held "
           "threw caught took got made gave said told wrote drew fell "
           "left cutting sitting getting putting running swimming "
           "jogging hitting").split():
    LEXICON[_w] = "VERB"

LEXICON["n't"] = "PART"
LEXICON["to"] = "ADP"
LEXICON["'re"] = "AUX"
LEXICON["'ll"] = "AUX"
LEXICON["'ve"] = "AUX"
LEXICON["'d"] = "AUX"
LEXICON["'m"] = "AUX"
