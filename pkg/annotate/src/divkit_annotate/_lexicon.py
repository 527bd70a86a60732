"""Compact word -> UPOS lexicon for the offline tagger backend.

Covers caption-domain function words and frequent content words; the
tagger falls back to suffix heuristics for anything absent. Outputs are
pinned by golden files in the test suite, not by any external tagger.
"""

TAGS: dict[str, str] = {}

_BY_TAG = {
    "DET": "a an the this that these those some any every each another "
           "all both no either neither",
    "PRON": "he she it they we you i him her them us me who whom whose "
            "his hers its their our your mine someone something anyone "
            "anything everyone everything nothing itself himself herself "
            "themselves",
    "ADP": "in on at by for with from to of into onto over under above "
           "below about against between among through during before after "
           "behind beside near across around along down up off out inside "
           "outside toward towards upon within without past via",
    "CCONJ": "and or but nor yet so",
    "SCONJ": "while because although though if when since as until unless",
    "AUX": "is are was were be been being am do does did has have had "
           "having will would can could shall should may might must",
    "ADV": "very quickly slowly not now then here there again also just "
           "only together away back well too still almost really quite "
           "never always often",
    "NUM": "one two three four five six seven eight nine ten zero",
    "PART": "n't",
    "ADJ": "big small large little long short tall high low old young new "
           "red blue green yellow black white brown pink purple gray "
           "orange dark light hot cold fast slow happy sad wet dry dirty "
           "clean empty full open closed wooden several many few other "
           "same different front left right male female",
    "NOUN": "man woman boy girl person people child children kid baby dog "
            "cat horse bird fish elephant monkey lion bear cow sheep goat "
            "chicken rabbit car truck bus train plane bike bicycle "
            "motorcycle boat road street ball game video music song guitar "
            "piano drum food cake bread rice soup meat egg fruit apple "
            "banana potato water milk juice tea coffee bowl plate cup "
            "glass knife fork spoon pan pot kitchen room house building "
            "field park garden beach ocean river lake mountain tree flower "
            "grass sky sun hair face hand arm leg foot head eye mouth "
            "table chair bed floor wall door window phone computer camera "
            "screen paper book pen bag box bottle toy shirt dress hat shoe "
            "crowd group team player singer dancer chef doctor teacher "
            "student stage pool gym track goal net wheel scene clip movie "
            "show city town market store shop restaurant",
    "VERB": "run walk jump play sing dance talk speak eat drink cook ride "
            "drive fly swim climb sit stand hold throw catch kick hit cut "
            "wash clean open close pour mix stir put take make get go come "
            "look watch see show wear carry pull push slice fry move turn "
            "spin roll fall laugh smile cry shoot score win lose try use "
            "give read write draw paint feed chase lift say tell ask "
            "start stop finish land travel race fight hug sleep rest "
            "ran went came saw ate drove flew swam sat stood held threw "
            "caught took got made gave said told wrote drew fell running "
            "sitting swimming getting putting cutting hitting",
}

for _tag, _words in _BY_TAG.items():
    for _w in _words.split():
        TAGS[_w] = _tag
