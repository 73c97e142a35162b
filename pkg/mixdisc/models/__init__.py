# Enumerations shared by the experiments and the command line
