# Initialize the tests package
