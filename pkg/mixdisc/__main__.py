from mixdisc.main import run

run()
