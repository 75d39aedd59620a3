from pupil_labs.rel_frobenius.main import main

if __name__ == "__main__":
    main()
