# concept_id, English, English synonyms, French, German, Hindi, Hindi romanized, English cloze
CONCEPTS = [
    ("fish", "fish", [], "poisson", "Fisch", "मछली", "machhalee", 'A "___" swims in rivers and breathes through gills.'),
    ("mango", "mango", [], "mangue", "Mango", "आम", "aam", 'A "___" is a sweet yellow fruit that grows in summer.'),
    ("brother", "brother", [], "frère", "Bruder", "भाई", "bhaee", 'A boy who has the same parents as you is your "___".'),
    ("smell", "smell", ["odor", "scent"], "odeur", "Geruch", "गंध", "gandh", 'The nose is used to notice a "___".'),
    ("sun", "sun", [], "soleil", "Sonne", "सूरज", "sooraj", 'The "___" rises in the east every morning.'),
    ("flower", "flower", [], "fleur", "Blume", "फूल", "phool", 'A "___" is often given as a gift and can be found in gardens.'),
    ("ball", "ball", [], "balle", "Ball", "गेंद", "gend", 'A "___" is used to play sports like soccer and basketball.'),
    ("book", "book", [], "livre", "Buch", "किताब", "kitaab", 'A "___" is used for reading stories.'),
    ("rope", "rope", ["cord"], "corde", "Seil", "रस्सी", "rassi", 'A "___" is used to tie things together.'),
    ("water", "water", [], "eau", "Wasser", "पानी", "paani", 'People drink "___" when they are thirsty.'),
    ("fire", "fire", ["flame"], "feu", "Feuer", "आग", "aag", 'A "___" gives heat and light but can burn you.'),
    ("house", "house", ["home"], "maison", "Haus", "घर", "ghar", 'A family lives together in a "___".'),
    ("tree", "tree", [], "arbre", "Baum", "पेड़", "ped", 'A tall "___" has a trunk, branches and leaves.'),
    ("moon", "moon", [], "lune", "Mond", "चाँद", "chaand", 'At night the "___" shines in the sky.'),
    ("star", "star", [], "étoile", "Stern", "तारा", "taara", 'A "___" twinkles in the night sky.'),
    ("sky", "sky", [], "ciel", "Himmel", "आसमान", "aasmaan", 'Birds fly high in the blue "___".'),
    ("river", "river", [], "rivière", "Fluss", "नदी", "nadi", 'A "___" flows from the mountains to the sea.'),
    ("mountain", "mountain", [], "montagne", "Berg", "पहाड़", "pahaad", 'A "___" is much higher than a hill.'),
    ("bird", "bird", [], "oiseau", "Vogel", "चिड़िया", "chidiya", 'A "___" has feathers and can fly.'),
    ("dog", "dog", [], "chien", "Hund", "कुत्ता", "kutta", 'A "___" barks and guards the house.'),
    ("cat", "cat", [], "chat", "Katze", "बिल्ली", "billi", 'A "___" says meow and likes milk.'),
    ("cow", "cow", [], "vache", "Kuh", "गाय", "gaay", 'A "___" gives milk and eats grass.'),
    ("horse", "horse", [], "cheval", "Pferd", "घोड़ा", "ghoda", 'A "___" can be ridden and runs very fast.'),
    ("elephant", "elephant", [], "éléphant", "Elefant", "हाथी", "haathi", 'An "___" has a long trunk and big ears.'),
    ("lion", "lion", [], "lion", "Löwe", "शेर", "sher", 'The "___" is called the king of the jungle.'),
    ("monkey", "monkey", [], "singe", "Affe", "बंदर", "bandar", 'A "___" climbs trees and loves bananas.'),
    ("snake", "snake", ["serpent"], "serpent", "Schlange", "साँप", "saanp", 'A "___" has no legs and moves by sliding.'),
    ("milk", "milk", [], "lait", "Milch", "दूध", "doodh", 'Babies drink white "___" to grow.'),
    ("bread", "bread", [], "pain", "Brot", "रोटी", "roti", 'A baker makes "___" from flour.'),
    ("rice", "rice", [], "riz", "Reis", "चावल", "chaawal", 'In many countries people eat boiled "___" every day.'),
    ("salt", "salt", [], "sel", "Salz", "नमक", "namak", 'We add "___" to food to make it less bland.'),
    ("sugar", "sugar", [], "sucre", "Zucker", "चीनी", "cheeni", 'We add "___" to tea to make it sweet.'),
    ("egg", "egg", [], "œuf", "Ei", "अंडा", "anda", 'A hen lays an "___".'),
    ("apple", "apple", [], "pomme", "Apfel", "सेब", "seb", 'An "___" is a round red or green fruit.'),
    ("banana", "banana", [], "banane", "Banane", "केला", "kela", 'A "___" is a long yellow fruit.'),
    ("door", "door", [], "porte", "Tür", "दरवाज़ा", "darwaza", 'You open a "___" to enter a room.'),
    ("window", "window", [], "fenêtre", "Fenster", "खिड़की", "khidki", 'Light comes into the room through a "___".'),
    ("chair", "chair", ["seat"], "chaise", "Stuhl", "कुर्सी", "kursi", 'You sit on a "___" at the table.'),
    ("table", "table", ["desk"], "table", "Tisch", "मेज़", "mez", 'We eat our meals on a "___".'),
    ("bed", "bed", [], "lit", "Bett", "बिस्तर", "bistar", 'At night we sleep in a "___".'),
    ("mother", "mother", ["mom"], "mère", "Mutter", "माँ", "maa", 'Your "___" is the woman who gave birth to you.'),
    ("father", "father", ["dad"], "père", "Vater", "पिता", "pita", 'Your "___" is the man who raised you.'),
    ("sister", "sister", [], "sœur", "Schwester", "बहन", "bahan", 'A girl who has the same parents as you is your "___".'),
    ("friend", "friend", ["pal"], "ami", "Freund", "दोस्त", "dost", 'A "___" is someone you like and trust.'),
    ("child", "child", ["kid"], "enfant", "Kind", "बच्चा", "bachcha", 'A young "___" goes to school to learn.'),
    ("man", "man", [], "homme", "Mann", "आदमी", "aadmi", 'A grown boy becomes a "___".'),
    ("woman", "woman", ["lady"], "femme", "Frau", "औरत", "aurat", 'A grown girl becomes a "___".'),
    ("king", "king", [], "roi", "König", "राजा", "raaja", 'A "___" rules a kingdom and wears a crown.'),
    ("teacher", "teacher", [], "enseignant", "Lehrer", "शिक्षक", "shikshak", 'A "___" teaches students in a classroom.'),
    ("farmer", "farmer", [], "agriculteur", "Bauer", "किसान", "kisaan", 'A "___" grows crops in the fields.'),
    ("hand", "hand", [], "main", "Hand", "हाथ", "haath", 'You hold a pen in your "___".'),
    ("eye", "eye", [], "œil", "Auge", "आँख", "aankh", 'You see the world with your "___".'),
    ("ear", "ear", [], "oreille", "Ohr", "कान", "kaan", 'You hear sounds with your "___".'),
    ("nose", "nose", [], "nez", "Nase", "नाक", "naak", 'You breathe and smell with your "___".'),
    ("head", "head", [], "tête", "Kopf", "सिर", "sir", 'A hat is worn on the "___".'),
    ("heart", "heart", [], "cœur", "Herz", "दिल", "dil", 'The "___" pumps blood through the body.'),
    ("tooth", "tooth", [], "dent", "Zahn", "दाँत", "daant", 'A dentist fixes a broken "___".'),
    ("hair", "hair", [], "cheveux", "Haar", "बाल", "baal", 'A barber cuts your "___".'),
    ("foot", "foot", [], "pied", "Fuß", "पैर", "pair", 'A shoe is worn on the "___".'),
    ("blood", "blood", [], "sang", "Blut", "खून", "khoon", 'Red "___" flows through our veins.'),
    ("day", "day", [], "jour", "Tag", "दिन", "din", 'The sun shines during the "___".'),
    ("night", "night", [], "nuit", "Nacht", "रात", "raat", 'It is dark during the "___".'),
    ("morning", "morning", ["dawn"], "matin", "Morgen", "सुबह", "subah", 'We eat breakfast in the "___".'),
    ("year", "year", [], "année", "Jahr", "साल", "saal", 'A "___" has twelve months.'),
    ("time", "time", [], "temps", "Zeit", "समय", "samay", 'A clock shows the "___".'),
    ("rain", "rain", [], "pluie", "Regen", "बारिश", "baarish", 'Water falls from clouds as "___".'),
    ("wind", "wind", ["breeze"], "vent", "Wind", "हवा", "hawa", 'The "___" makes the leaves move.'),
    ("cloud", "cloud", [], "nuage", "Wolke", "बादल", "baadal", 'A grey "___" brings rain.'),
    ("earth", "earth", ["ground"], "terre", "Erde", "धरती", "dharti", 'Plants grow out of the "___".'),
    ("stone", "stone", ["rock"], "pierre", "Stein", "पत्थर", "patthar", 'A "___" is hard and heavy.'),
    ("gold", "gold", [], "or", "Gold", "सोना", "sona", 'A ring made of "___" is shiny and expensive.'),
    ("iron", "iron", [], "fer", "Eisen", "लोहा", "loha", 'A strong metal used to make tools is "___".'),
    ("money", "money", ["cash"], "argent", "Geld", "पैसा", "paisa", 'You pay for things with "___".'),
    ("road", "road", ["street"], "route", "Straße", "सड़क", "sadak", 'Cars drive on a "___".'),
    ("village", "village", [], "village", "Dorf", "गाँव", "gaanv", 'A small "___" has few houses and many farms.'),
    ("city", "city", ["town"], "ville", "Stadt", "शहर", "shahar", 'A big "___" has tall buildings and busy streets.'),
    ("school", "school", [], "école", "Schule", "विद्यालय", "vidyalay", 'Children learn in a "___".'),
    ("name", "name", [], "nom", "Name", "नाम", "naam", 'Your "___" is what people call you.'),
    ("song", "song", [], "chanson", "Lied", "गाना", "gaana", 'A singer sings a "___".'),
    ("word", "word", [], "mot", "Wort", "शब्द", "shabd", 'A sentence is made of more than one "___".'),
    ("language", "language", ["tongue"], "langue", "Sprache", "भाषा", "bhaasha", 'Hindi is a "___" spoken in India.'),
    ("love", "love", [], "amour", "Liebe", "प्यार", "pyaar", 'A mother feels deep "___" for her child.'),
    ("fear", "fear", [], "peur", "Angst", "डर", "dar", 'A dark forest can fill you with "___".'),
    ("anger", "anger", ["rage"], "colère", "Wut", "गुस्सा", "gussa", 'Shouting is a sign of "___".'),
    ("red", "red", [], "rouge", "rot", "लाल", "laal", 'The color of blood is "___".'),
    ("green", "green", [], "vert", "grün", "हरा", "hara", 'The color of grass is "___".'),
    ("black", "black", ["dark"], "noir", "schwarz", "काला", "kaala", 'The color of coal is "___".'),
    ("white", "white", [], "blanc", "weiß", "सफ़ेद", "safed", 'The color of snow is "___".'),
    ("big", "big", ["large"], "grand", "groß", "बड़ा", "bada", 'An elephant is a very "___" animal.'),
    ("small", "small", ["little"], "petit", "klein", "छोटा", "chhota", 'An ant is a very "___" insect.'),
    ("new", "new", [], "nouveau", "neu", "नया", "naya", 'Something just bought from the shop is "___".'),
    ("old", "old", [], "vieux", "alt", "पुराना", "puraana", 'A building from long ago is "___".'),
    ("hot", "hot", [], "chaud", "heiß", "गरम", "garam", 'Soup just off the stove is "___".'),
    ("cold", "cold", [], "froid", "kalt", "ठंडा", "thanda", 'Ice feels very "___".'),
    ("fast", "fast", ["swift", "quick"], "rapide", "schnell", "तेज़", "tez", 'A cheetah is a very "___" runner.'),
    ("sleep", "sleep", [], "sommeil", "Schlaf", "नींद", "neend", 'After a long day you need "___".'),
    ("food", "food", ["meal"], "nourriture", "Essen", "खाना", "khaana", 'When you are hungry you need "___".'),
    ("leaf", "leaf", [], "feuille", "Blatt", "पत्ता", "patta", 'A green "___" grows on a branch.'),
    ("seed", "seed", [], "graine", "Samen", "बीज", "beej", 'A plant grows from a "___".'),
    ("ship", "ship", ["vessel"], "navire", "Schiff", "जहाज़", "jahaaz", 'A large "___" sails across the ocean.'),
    ("key", "key", [], "clé", "Schlüssel", "चाबी", "chaabi", 'A "___" is used to open a lock.'),
    ("knife", "knife", [], "couteau", "Messer", "चाकू", "chaaku", 'A "___" is used to cut vegetables.'),
    ("boat", "boat", [], "bateau", "Boot", "नाव", "naav", 'A small "___" floats on the lake.'),
    ("garden", "garden", [], "jardin", "Garten", "बगीचा", "bageecha", 'Flowers and vegetables grow in a "___".'),
    ("music", "music", [], "musique", "Musik", "संगीत", "sangeet", 'People dance when they hear "___".'),
]

# Hindi synonyms (native, romanized) for a few concepts.
HINDI_SYNONYMS = {
    "water": (["जल"], ["jal"]),
    "sun": (["सूर्य"], ["soorya"]),
    "flower": (["पुष्प"], ["pushp"]),
    "friend": (["मित्र"], ["mitra"]),
    "king": (["नरेश"], ["naresh"]),
}

LABELS = {
    ("en", "native"): "English",
    ("fr", "native"): "Français",
    ("de", "native"): "Deutsch",
    ("hi", "native"): "हिन्दी",
    ("hi", "romanized"): "Hindi",
}

ANSWER_CUES = {("en", "native"): "Answer"}

ANSWER_CUES[("hi", "native")] = "उत्तर"

# Native-script Hindi cloze sentences for a subset of concepts.
HINDI_CLOZE = {
    "ball": 'फुटबॉल और बास्केटबॉल जैसे खेल खेलने के लिए "___" का उपयोग किया जाता है.',
    "book": 'एक "___" कहानियाँ पढ़ने के लिए उपयोग की जाती है.',
    "flower": 'एक "___" अक्सर उपहार के रूप में दिया जाता है और यह बगीचों में पाया जा सकता है.',
    "water": 'प्यास लगने पर लोग "___" पीते हैं.',
    "sun": 'हर सुबह "___" पूर्व में उगता है.',
    "moon": 'रात को आसमान में "___" चमकता है.',
    "dog": 'एक "___" भौंकता है और घर की रखवाली करता है.',
    "cow": 'एक "___" दूध देती है और घास खाती है.',
    "milk": 'बच्चे बढ़ने के लिए सफ़ेद "___" पीते हैं.',
    "fish": 'एक "___" नदी में तैरती है.',
    "key": 'ताला खोलने के लिए "___" का उपयोग किया जाता है.',
    "knife": 'सब्ज़ी काटने के लिए "___" का उपयोग किया जाता है.',
    "tree": 'एक ऊँचे "___" पर पत्ते और डालियाँ होती हैं.',
    "bird": 'एक "___" के पंख होते हैं और वह उड़ सकती है.',
    "house": 'परिवार एक "___" में साथ रहता है.',
    "egg": 'मुर्गी एक "___" देती है.',
    "rain": 'बादलों से "___" का पानी गिरता है.',
    "king": 'एक "___" राज्य पर शासन करता है और मुकुट पहनता है.',
    "school": 'बच्चे "___" में पढ़ना सीखते हैं.',
    "boat": 'झील पर एक छोटी "___" तैरती है.',
}
