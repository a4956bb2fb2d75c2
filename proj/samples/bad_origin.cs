public a
a, ?x |- b
