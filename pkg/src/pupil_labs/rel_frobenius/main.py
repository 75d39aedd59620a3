import sys


def main() -> None:
    from pupil_labs.rel_frobenius.app import RelFrobeniusApp

    app = RelFrobeniusApp(sys.argv)
    sys.exit(app.run())
